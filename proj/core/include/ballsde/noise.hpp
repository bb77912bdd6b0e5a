#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ballsde/model.hpp"

namespace ballsde {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// Uniform in the open interval (0, 1) from the first 64 bits of the Philox
/// block keyed by `seed` at counter (path_index, step, component).
double uniform_at(SeedSpec seed, std::uint32_t step, std::uint32_t component) noexcept;

/// Standard normal quantile, rational approximation with relative error
/// below 1.2e-9 on (0, 1).
double normal_quantile(double p) noexcept;

/// Standard normal draw addressed by (seed, step, component).
inline double standard_normal_at(SeedSpec seed, std::uint32_t step, std::uint32_t component) noexcept {
  return normal_quantile(uniform_at(seed, step, component));
}

/// Rounds to the nearest multiple of 2^-40. Sums of lattice values stay exact
/// while their magnitude is below 2^13, so coarsening commutes with any
/// summation order.
double quantize_increment(double v) noexcept;

/// Increments of B = (W, What) over a uniform grid. Component j < d is W_j,
/// component d + p is What_p.
class BrownianPath {
 public:
  BrownianPath(TimeGrid grid, std::size_t d, std::size_t m, std::vector<double> dW, std::vector<double> dWhat);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t steps() const noexcept { return grid_.steps(); }

  std::span<const double> dW(std::size_t k) const { return {dW_.data() + k * d_, d_}; }
  std::span<const double> dWhat(std::size_t k) const { return {dWhat_.data() + k * m_, m_}; }
  std::span<const double> all_dW() const noexcept { return dW_; }
  std::span<const double> all_dWhat() const noexcept { return dWhat_; }

  friend bool operator==(const BrownianPath&, const BrownianPath&) = default;

 private:
  TimeGrid grid_;
  std::size_t d_;
  std::size_t m_;
  std::vector<double> dW_;
  std::vector<double> dWhat_;
};

/// The increment for (step k, component j) is sqrt(dt) * z, quantized, where
/// z is the normal addressed by (seed, k, j); no increment depends on any other.
BrownianPath sample_path(SeedSpec seed, const TimeGrid& grid, std::size_t d, std::size_t m);

/// Sums blocks of r consecutive fine increments, in index order.
BrownianPath coarsen(const BrownianPath& path, std::size_t r);

/// Little-endian dump: u64 n, u64 d, u64 m, f64 dt, then per step the d W
/// increments followed by the m What increments, all f64.
void write_path_binary(const BrownianPath& path, const std::filesystem::path& file);
BrownianPath read_path_binary(const std::filesystem::path& file);

}  // namespace ballsde
