#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ballsde {

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

/// Running sums for a fixed number of scalar statistics.
struct MomentSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::size_t count = 0;

  MomentSums() = default;
  explicit MomentSums(std::size_t slots) : sum(slots, 0.0), sum_sq(slots, 0.0) {}

  void add(std::size_t slot, double v) noexcept {
    sum[slot] += v;
    sum_sq[slot] += v * v;
  }
  void merge(const MomentSums& other);

  Estimate estimate(std::size_t slot) const noexcept;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> slope_stderr;  // needs >= 3 points
};

/// Ordinary least squares y = intercept + slope * x. nullopt with fewer than
/// two points or when all x coincide.
std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y);

/// Fit of log(err) against log(n); nullopt if any err <= 0.
std::optional<LineFit> fit_loglog(std::span<const double> n, std::span<const double> err);

}  // namespace ballsde
