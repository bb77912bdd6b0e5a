#include "ballsde/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ballsde/error.hpp"

namespace ballsde {

void MomentSums::merge(const MomentSums& other) {
  if (other.sum.size() != sum.size()) throw Error(ErrorKind::DimensionMismatch, "cannot merge sums of different size");
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] += other.sum[i];
    sum_sq[i] += other.sum_sq[i];
  }
  count += other.count;
}

Estimate MomentSums::estimate(std::size_t slot) const noexcept {
  if (count == 0) return {};
  const double n = static_cast<double>(count);
  const double mean = sum[slot] / n;
  if (count < 2) return {mean, 0.0};
  const double var = std::max(0.0, (sum_sq[slot] - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n >= 3) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

std::optional<LineFit> fit_loglog(std::span<const double> n, std::span<const double> err) {
  if (n.size() != err.size()) return std::nullopt;
  std::vector<double> lx(n.size());
  std::vector<double> ly(err.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(err[i] > 0.0)) return std::nullopt;
    lx[i] = std::log(n[i]);
    ly[i] = std::log(err[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace ballsde
