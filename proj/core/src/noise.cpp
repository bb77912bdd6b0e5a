#include "ballsde/noise.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <string>

#include "ballsde/error.hpp"
#include "ballsde/philox.hpp"

namespace ballsde {

double uniform_at(SeedSpec seed, std::uint32_t step, std::uint32_t component) noexcept {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed.master_seed),
                            static_cast<std::uint32_t>(seed.master_seed >> 32)};
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(seed.path_index),
                                static_cast<std::uint32_t>(seed.path_index >> 32), step, component};
  const auto out = Philox4x32::generate(ctr, key);
  const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
  // 53 significant bits, shifted off zero by half an ulp.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double normal_quantile(double p) noexcept {
  // Acklam's algorithm.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  constexpr double kHigh = 1.0 - kLow;

  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > kHigh) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double quantize_increment(double v) noexcept { return std::nearbyint(v * 0x1.0p40) * 0x1.0p-40; }

BrownianPath::BrownianPath(TimeGrid grid, std::size_t d, std::size_t m, std::vector<double> dW,
                           std::vector<double> dWhat)
    : grid_(grid), d_(d), m_(m), dW_(std::move(dW)), dWhat_(std::move(dWhat)) {
  if (dW_.size() != grid_.steps() * d_ || dWhat_.size() != grid_.steps() * m_) {
    throw Error(ErrorKind::DimensionMismatch, "increment arrays do not match grid and dimensions");
  }
}

BrownianPath sample_path(SeedSpec seed, const TimeGrid& grid, std::size_t d, std::size_t m) {
  const std::size_t n = grid.steps();
  if (n > UINT32_MAX || d + m > UINT32_MAX) throw Error(ErrorKind::InvalidGrid, "grid too large for counter layout");
  const double scale = std::sqrt(grid.dt());
  std::vector<double> dW(n * d);
  std::vector<double> dWhat(n * m);
  for (std::size_t k = 0; k < n; ++k) {
    const auto step = static_cast<std::uint32_t>(k);
    for (std::size_t j = 0; j < d; ++j) {
      dW[k * d + j] = quantize_increment(scale * standard_normal_at(seed, step, static_cast<std::uint32_t>(j)));
    }
    for (std::size_t p = 0; p < m; ++p) {
      dWhat[k * m + p] =
          quantize_increment(scale * standard_normal_at(seed, step, static_cast<std::uint32_t>(d + p)));
    }
  }
  return {grid, d, m, std::move(dW), std::move(dWhat)};
}

BrownianPath coarsen(const BrownianPath& path, std::size_t r) {
  const std::size_t n = path.steps();
  if (r == 0 || n % r != 0) {
    throw Error(ErrorKind::IndivisibleRefinement,
                "factor " + std::to_string(r) + " does not divide " + std::to_string(n) + " steps");
  }
  if (r == 1) return path;
  const std::size_t nc = n / r;
  const std::size_t d = path.d();
  const std::size_t m = path.m();
  std::vector<double> dW(nc * d, 0.0);
  std::vector<double> dWhat(nc * m, 0.0);
  for (std::size_t k = 0; k < nc; ++k) {
    for (std::size_t i = 0; i < r; ++i) {
      const auto fine_w = path.dW(k * r + i);
      for (std::size_t j = 0; j < d; ++j) dW[k * d + j] += fine_w[j];
      const auto fine_h = path.dWhat(k * r + i);
      for (std::size_t p = 0; p < m; ++p) dWhat[k * m + p] += fine_h[p];
    }
  }
  return {TimeGrid(path.grid().horizon(), nc), d, m, std::move(dW), std::move(dWhat)};
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary path dump assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error(ErrorKind::Io, "truncated path file");
  return value;
}

}  // namespace

void write_path_binary(const BrownianPath& path, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + file.string());
  put<std::uint64_t>(out, path.steps());
  put<std::uint64_t>(out, path.d());
  put<std::uint64_t>(out, path.m());
  put<double>(out, path.grid().dt());
  for (std::size_t k = 0; k < path.steps(); ++k) {
    for (double v : path.dW(k)) put(out, v);
    for (double v : path.dWhat(k)) put(out, v);
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + file.string());
}

BrownianPath read_path_binary(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
  const auto n = get<std::uint64_t>(in);
  const auto d = get<std::uint64_t>(in);
  const auto m = get<std::uint64_t>(in);
  const auto dt = get<double>(in);
  std::vector<double> dW(n * d);
  std::vector<double> dWhat(n * m);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) dW[k * d + j] = get<double>(in);
    for (std::size_t p = 0; p < m; ++p) dWhat[k * m + p] = get<double>(in);
  }
  return {TimeGrid(dt * static_cast<double>(n), n), d, m, std::move(dW), std::move(dWhat)};
}

}  // namespace ballsde
