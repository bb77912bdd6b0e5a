#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ballsde/linalg.hpp"
#include "ballsde/model.hpp"
#include "ballsde/noise.hpp"

namespace ballsde {

/// Nearest point of the closed unit ball.
Vector projection(std::span<const double> x);
void project_in_place(std::span<double> x) noexcept;

/// Positive root y of y = b + c_dt / y for c_dt >= 0. At c_dt == 0 this is
/// the limit max(b, 0). Uses the conjugate form when b < 0.
double positive_root(double b, double c_dt) noexcept;

/// Positive root of y = b + (kappa - nu^2/2) dt / y.
/// Throws RegimeViolation unless kappa - nu^2/2 > 0.
double backward_root(double b, double kappa, double nu, double dt);

/// Whether the implicit y0 equation may run at kappa - nu^2/2 == 0, where the
/// root degenerates to max(b, 0) and y0 can reach zero.
enum class RootPolicy { Strict, AdmitBoundary };

/// One drift-implicit Euler step of the lifted system (y0, x). Only the y0
/// update is implicit; the x update uses the current y0 and x.
class BackwardStepper {
 public:
  BackwardStepper(const ModelParams& params, double dt, RootPolicy policy = RootPolicy::Strict);

  /// `in` and `out` hold (y0, x_1..x_d) and must not alias.
  void advance(std::span<const double> in, std::span<const double> dW, std::span<const double> dWhat,
               std::span<double> out) const noexcept;

  std::size_t dim() const noexcept { return d_; }

 private:
  std::size_t d_;
  double kappa_;
  double nu_;
  double dt_;
  double c_dt_;          // (kappa - nu^2/2) dt
  double y0_damping_;    // (kappa - nu^2/2 + d nu^2/2) dt
  DenseMatrix drift_;    // A0 + 1/2 sum_p A_p^2
  bool has_drift_;
  std::vector<DenseMatrix> noise_;
};

AugmentedState backward_step(const AugmentedState& state, std::span<const double> dW,
                             std::span<const double> dWhat, const ModelParams& params, double dt);

/// Row k holds (y0, x_1..x_d) at t_k.
class BackwardPath {
 public:
  BackwardPath(TimeGrid grid, std::size_t d) : grid_(grid), d_(d), data_((grid.steps() + 1) * (d + 1)) {}

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t size() const noexcept { return grid_.steps() + 1; }

  std::span<const double> row(std::size_t k) const { return {data_.data() + k * (d_ + 1), d_ + 1}; }
  std::span<double> row(std::size_t k) { return {data_.data() + k * (d_ + 1), d_ + 1}; }
  double y0(std::size_t k) const { return data_[k * (d_ + 1)]; }
  std::span<const double> x(std::size_t k) const { return row(k).subspan(1); }
  AugmentedState state(std::size_t k) const { return {y0(k), Vector(x(k).begin(), x(k).end())}; }

 private:
  TimeGrid grid_;
  std::size_t d_;
  std::vector<double> data_;
};

/// Row k holds a d-vector at t_k.
class VectorPath {
 public:
  VectorPath(TimeGrid grid, std::size_t d) : grid_(grid), d_(d), data_((grid.steps() + 1) * d) {}

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t size() const noexcept { return grid_.steps() + 1; }

  std::span<const double> x(std::size_t k) const { return {data_.data() + k * d_, d_}; }
  std::span<double> x(std::size_t k) { return {data_.data() + k * d_, d_}; }

 private:
  TimeGrid grid_;
  std::size_t d_;
  std::vector<double> data_;
};

/// Starts from lift(x0) and applies BackwardStepper on every increment of `path`.
/// Throws RegimeViolation when kappa / nu^2 <= 1/2 (or < 1/2 under AdmitBoundary),
/// DimensionMismatch / InvalidGrid when the path does not fit the model.
BackwardPath simulate_backward(const ModelParams& params, const BrownianPath& path,
                               RootPolicy policy = RootPolicy::Strict);

VectorPath project_path(const BackwardPath& path);

/// Explicit Euler-Maruyama for the Ito form of the ball SDE, radicand clamped
/// at zero. May leave the ball.
Vector forward_em_step(std::span<const double> x, std::span<const double> dW, std::span<const double> dWhat,
                       const ModelParams& params, double dt);
VectorPath simulate_forward_em(const ModelParams& params, const BrownianPath& path);

/// dy = (a - b y) dt + gamma sqrt(|y (1 - y)|) dW on [0, 1].
struct WrightFisherParams {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double y0 = 0.0;

  // Feller conditions, with slack for rounding in gamma^2.
  bool avoids_zero() const noexcept { return 2.0 * a / (gamma * gamma) >= 1.0 - 1e-12; }
  bool avoids_one() const noexcept { return 2.0 * (b - a) / (gamma * gamma) >= 1.0 - 1e-12; }

  /// Law of 1 - |X|^2 for the isotropic ball diffusion.
  static WrightFisherParams for_one_minus_radius(const ModelParams& params);
};

/// Euler step clamped to [0, 1].
double wf_step(double y, const WrightFisherParams& wf, double dN, double dt) noexcept;

/// Drives wf_step with the first component of `path`.
std::vector<double> simulate_wf(const WrightFisherParams& wf, const BrownianPath& path);

}  // namespace ballsde
