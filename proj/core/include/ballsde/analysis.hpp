#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ballsde/linalg.hpp"
#include "ballsde/model.hpp"
#include "ballsde/noise.hpp"
#include "ballsde/schemes.hpp"
#include "ballsde/stats.hpp"

namespace ballsde {

struct MonteCarloOptions {
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

// ---------------------------------------------------------------------------
// Strong error against a fine-grid self reference

struct ErrorReport {
  std::vector<std::size_t> n_values;
  std::vector<double> err_max_of_mean;  // max_k E[|e_k|^2]^{1/2}
  std::vector<double> se_max_of_mean;
  std::vector<double> err_mean_of_max;  // E[max_k |e_k|^2]^{1/2}
  std::vector<double> se_mean_of_max;
  std::size_t paths = 0;
  std::size_t ref_n = 0;
  std::optional<double> slope_max_of_mean;
  std::optional<double> slope_mean_of_max;
  std::optional<double> slope_stderr_max_of_mean;
  std::optional<double> slope_stderr_mean_of_max;
  bool regime_warning = false;  // kappa / nu^2 <= 6
};

struct StrongErrorResult {
  ErrorReport lifted;     // e_k = Y_ref(t_k) - Y^(n)(t_k) in R^{d+1}
  ErrorReport projected;  // e_k = Pi(X_ref(t_k)) - Pi(X^(n)(t_k))
  double min_y0 = 0.0;    // smallest y0 over every simulated state
};

struct StrongErrorOptions {
  std::vector<std::size_t> n_values;
  std::size_t ref_n = 0;
  MonteCarloOptions mc;
};

/// For every path, samples the Brownian path at ref_n, simulates the backward
/// scheme there as the reference, coarsens to each n and compares at the
/// shared grid points. Throws IndivisibleRefinement if some n does not divide
/// ref_n, InvalidArgument if n_values is not strictly increasing or M < 100.
StrongErrorResult strong_error(const ModelParams& params, const StrongErrorOptions& options);

/// Smallest C with err(n_0) <= C n_0^{-1/4} at the coarsest level.
double quarter_rate_constant(const ErrorReport& report);

// ---------------------------------------------------------------------------
// Second moment and the radial generator

/// E|X(t)|^2 = s + (|x0|^2 - s) e^{-(d nu^2 + 2 kappa) t},  s = d nu^2 / (d nu^2 + 2 kappa).
double analytic_second_moment(const ModelParams& params, double t);

/// (|x0|^2 + d nu^2 t) e^{-(d nu^2 + 2 kappa) t}
double gronwall_decay_bound(const ModelParams& params, double t);

struct GeneratorMatrix {
  std::size_t K = 0;
  /// Moment vector m_j(t) = E[|X(t)|^{2j}], j = 0..K, solves m' = G m. Row j
  /// holds the coefficients of L y^j on y^{j-1} (column j-1) and y^j (column j).
  /// This is the transpose of the coefficient-vector convention L p = H^T G p.
  DenseMatrix G;
};

GeneratorMatrix radial_generator(const ModelParams& params, std::size_t K);

/// E[|X(t)|^{2j}] for j = 0..K via e^{tG} applied to (1, |x0|^2, ..., |x0|^{2K}).
std::vector<double> radial_moments(const ModelParams& params, double t, std::size_t K);

/// E[|X(t)|^{2k}]. Throws DegreeExceeded when k > K.
double radial_moment(const ModelParams& params, std::size_t k, double t, std::size_t K);

/// Monte Carlo E[|Xbar^(n)(t)|^{2j}] for the projected scheme, at grid indices
/// `sample_steps` and powers j = 1..K. Result indexed [sample][j - 1].
std::vector<std::vector<Estimate>> projected_moments_mc(const ModelParams& params, std::size_t n,
                                                        const std::vector<std::size_t>& sample_steps,
                                                        std::size_t K, const MonteCarloOptions& mc);

/// Monte Carlo E[y(T)] for the clamped Wright-Fisher Euler scheme.
Estimate wf_terminal_mean(const WrightFisherParams& wf, double T, std::size_t n, const MonteCarloOptions& mc);

/// Fraction of forward Euler-Maruyama paths with |x_k| > 1 for some k.
double forward_em_exit_fraction(const ModelParams& params, std::size_t n, const MonteCarloOptions& mc);

// ---------------------------------------------------------------------------
// Moment diagnostics on scheme samples

struct InverseMomentReport {
  std::vector<double> times;           // grid times actually used
  std::vector<Estimate> estimate;      // E[y0^{-q}] from all paths
  std::vector<double> half_estimate;   // from the first half of the paths
  double max_estimate = 0.0;
  double worst_ratio = 1.0;            // full / half, furthest from 1
  bool stable = false;                 // every ratio in [0.8, 1.25]
};

/// Throws RegimeViolation if q >= kappa / nu^2 or kappa / nu^2 < 1.
InverseMomentReport inverse_moment_check(const ModelParams& params, double q, const std::vector<double>& t_samples,
                                         std::size_t n, const MonteCarloOptions& mc);

struct HolderReport {
  std::vector<double> lags;                   // |t - s|
  std::vector<std::vector<double>> moments;   // [lag][coordinate], coordinate 0 is y0
  std::vector<double> slopes;                 // per coordinate, log-moment vs log-lag
};

/// E|Y_i(t) - Y_i(s)|^q over non-overlapping windows of 1, 2, 4, ... steps.
/// Throws RegimeViolation unless 2 <= q < kappa / nu^2.
HolderReport holder_check(const ModelParams& params, double q, std::size_t n, std::size_t levels,
                          const MonteCarloOptions& mc);

/// |Y_i(t_j) - Y_i(t_i)|^q on one path.
double increment_moment(const BackwardPath& path, std::size_t coordinate, std::size_t s_step, std::size_t t_step,
                        double q);

// ---------------------------------------------------------------------------
// Distance between two coupled solutions

struct DistanceReport {
  std::vector<double> times;
  std::vector<double> distance;  // |Y^1(t_k) - Y^2(t_k)| on the scheme's own (y0, x)
  std::size_t increases = 0;
  double max_increase = 0.0;
  double tolerance = 0.0;  // 10 dt^{1/4}
  std::size_t exceedances = 0;  // steps with D_{k+1} > D_k + tolerance
};

/// Two backward-scheme paths from x0_a and x0_b driven by path index 0 of `seed`.
/// Requires nu == sqrt(2), kappa >= 1 and all skew matrices zero (RegimeViolation).
DistanceReport distance_monotonicity(const ModelParams& params, const Vector& x0_a, const Vector& x0_b,
                                     std::size_t n, std::uint64_t seed);

}  // namespace ballsde
