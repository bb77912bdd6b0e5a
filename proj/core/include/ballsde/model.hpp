#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "ballsde/linalg.hpp"

namespace ballsde {

/// Diffusion scale for which distance monotonicity of the lifted process is known.
inline constexpr double kSqrt2 = std::numbers::sqrt2;

/// Tolerance on |x| - 1 accepted by lift().
inline constexpr double kLiftTolerance = 1e-12;

/// Coefficients of
///   dX = -kappa X dt + nu sqrt(1 - |X|^2) dW + A0 X dt + sum_p A_p X o dWhat_p
/// on the closed unit ball of R^d, started at x0 and run to horizon T.
struct ModelParams {
  std::size_t d = 2;
  double kappa = 0.0;
  double nu = 1.0;
  DenseMatrix A0;
  std::vector<DenseMatrix> A;  // m Stratonovich noise matrices
  Vector x0;
  double T = 1.0;

  std::size_t m() const noexcept { return A.size(); }
  double ratio() const noexcept { return kappa / (nu * nu); }

  /// Isotropic model with A0 = 0 and no skew noise.
  static ModelParams isotropic(std::size_t d, double kappa, double nu, Vector x0, double T);
};

struct RegimeReport {
  double ratio = 0.0;
  bool pathwise_unique = false;    // ratio > sqrt(2) - 1
  bool backward_solvable = false;  // ratio > 1/2
  bool rate_theorem = false;       // ratio > 6
  bool swart_monotone = false;     // kappa >= 1, nu == sqrt(2), all A_p == 0
};

/// Checks the structural invariants of `params` and classifies its regime.
/// Throws Error{NonSkewMatrix | InitialPointOnBoundary | NonPositiveParam |
/// DimensionMismatch} for inputs that do not describe a ball-valued diffusion.
RegimeReport validate(const ModelParams& params);

/// Lift x -> (sqrt(1 - |x|^2), x).
struct AugmentedState {
  double y0 = 1.0;
  Vector x;

  friend bool operator==(const AugmentedState&, const AugmentedState&) = default;
};

AugmentedState lift(std::span<const double> x);

/// Uniform grid t_k = k T / n.
class TimeGrid {
 public:
  TimeGrid(double T, std::size_t n);

  double horizon() const noexcept { return T_; }
  std::size_t steps() const noexcept { return n_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t k) const noexcept { return k == n_ ? T_ : static_cast<double>(k) * dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double T_;
  std::size_t n_;
  double dt_;
};

}  // namespace ballsde
