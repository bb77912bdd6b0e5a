#include "ballsde/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ballsde/error.hpp"

namespace ballsde {

namespace {

void check_path_fits(const ModelParams& params, const BrownianPath& path) {
  if (path.d() != params.d || path.m() != params.m()) {
    throw Error(ErrorKind::DimensionMismatch, "Brownian path dimensions do not match the model");
  }
  if (std::abs(path.grid().horizon() - params.T) > 1e-12 * std::max(1.0, params.T)) {
    throw Error(ErrorKind::InvalidGrid, "Brownian path horizon does not match T");
  }
}

}  // namespace

Vector projection(std::span<const double> x) {
  Vector out(x.begin(), x.end());
  project_in_place(out);
  return out;
}

void project_in_place(std::span<double> x) noexcept {
  const double r = norm(x);
  if (r > 1.0) {
    for (double& v : x) v /= r;
    // x / |x| can round to norm 1 + ulp; shrink until it is inside, which
    // also makes the map exactly idempotent.
    while (squared_norm(x) > 1.0) {
      for (double& v : x) v = std::nextafter(v, 0.0);
    }
  }
}

double positive_root(double b, double c_dt) noexcept {
  const double disc = std::sqrt(b * b + 4.0 * c_dt);
  if (b >= 0.0) return 0.5 * (b + disc);
  return 2.0 * c_dt / (disc - b);
}

double backward_root(double b, double kappa, double nu, double dt) {
  const double c = kappa - 0.5 * nu * nu;
  if (!(c > 0.0)) throw Error(ErrorKind::RegimeViolation, "kappa - nu^2/2 must be > 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  return positive_root(b, c * dt);
}

BackwardStepper::BackwardStepper(const ModelParams& params, double dt, RootPolicy policy)
    : d_(params.d), kappa_(params.kappa), nu_(params.nu), dt_(dt), drift_(params.A0), noise_(params.A) {
  const double nu2 = params.nu * params.nu;
  double c = params.kappa - 0.5 * nu2;
  // nu = sqrt(2) squares to 2 + 4e-16, so the boundary case needs some slack.
  const bool ok = policy == RootPolicy::Strict ? c > 0.0 : c >= -1e-12 * std::max(1.0, params.kappa);
  if (!ok) {
    throw Error(ErrorKind::RegimeViolation,
                "backward scheme needs kappa/nu^2 > 1/2 (ratio " + std::to_string(params.ratio()) + ")");
  }
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (drift_.rows() != d_ || drift_.cols() != d_) throw Error(ErrorKind::DimensionMismatch, "A0 must be d x d");

  c = std::max(c, 0.0);
  c_dt_ = c * dt;
  y0_damping_ = (c + 0.5 * static_cast<double>(d_) * nu2) * dt;
  for (const auto& a : noise_) drift_ = drift_ + 0.5 * (a * a);
  has_drift_ = !drift_.is_zero();
}

void BackwardStepper::advance(std::span<const double> in, std::span<const double> dW,
                              std::span<const double> dWhat, std::span<double> out) const noexcept {
  const double y0 = in[0];
  const auto x = in.subspan(1);
  auto x_next = out.subspan(1);

  const double b = y0 - nu_ * dot(x, dW) - y0_damping_ * y0;
  out[0] = positive_root(b, c_dt_);

  for (std::size_t i = 0; i < d_; ++i) x_next[i] = x[i] - kappa_ * x[i] * dt_ + nu_ * y0 * dW[i];
  if (has_drift_) apply_add(drift_, x, dt_, x_next);
  for (std::size_t p = 0; p < noise_.size(); ++p) apply_add(noise_[p], x, dWhat[p], x_next);
}

AugmentedState backward_step(const AugmentedState& state, std::span<const double> dW,
                             std::span<const double> dWhat, const ModelParams& params, double dt) {
  if (state.x.size() != params.d || dW.size() != params.d || dWhat.size() != params.m()) {
    throw Error(ErrorKind::DimensionMismatch, "state or increments do not match the model");
  }
  const BackwardStepper stepper(params, dt);
  Vector in(params.d + 1);
  Vector out(params.d + 1);
  in[0] = state.y0;
  std::copy(state.x.begin(), state.x.end(), in.begin() + 1);
  stepper.advance(in, dW, dWhat, out);
  return {out[0], Vector(out.begin() + 1, out.end())};
}

BackwardPath simulate_backward(const ModelParams& params, const BrownianPath& path, RootPolicy policy) {
  check_path_fits(params, path);
  const BackwardStepper stepper(params, path.grid().dt(), policy);
  BackwardPath out(path.grid(), params.d);
  const AugmentedState start = lift(params.x0);
  auto first = out.row(0);
  first[0] = start.y0;
  std::copy(start.x.begin(), start.x.end(), first.begin() + 1);
  for (std::size_t k = 0; k < path.steps(); ++k) {
    stepper.advance(out.row(k), path.dW(k), path.dWhat(k), out.row(k + 1));
  }
  return out;
}

VectorPath project_path(const BackwardPath& path) {
  VectorPath out(path.grid(), path.d());
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto src = path.x(k);
    auto dst = out.x(k);
    std::copy(src.begin(), src.end(), dst.begin());
    project_in_place(dst);
  }
  return out;
}

Vector forward_em_step(std::span<const double> x, std::span<const double> dW, std::span<const double> dWhat,
                       const ModelParams& params, double dt) {
  if (x.size() != params.d || dW.size() != params.d || dWhat.size() != params.m()) {
    throw Error(ErrorKind::DimensionMismatch, "state or increments do not match the model");
  }
  const double diffusion = params.nu * std::sqrt(std::max(0.0, 1.0 - squared_norm(x)));
  Vector out(params.d);
  for (std::size_t i = 0; i < params.d; ++i) out[i] = x[i] - params.kappa * x[i] * dt + diffusion * dW[i];
  apply_add(params.A0, x, dt, out);
  for (std::size_t p = 0; p < params.m(); ++p) {
    const auto& a = params.A[p];
    apply_add(a, x, dWhat[p], out);
    apply_add(a, matvec(a, x), 0.5 * dt, out);
  }
  return out;
}

VectorPath simulate_forward_em(const ModelParams& params, const BrownianPath& path) {
  check_path_fits(params, path);
  VectorPath out(path.grid(), params.d);
  std::copy(params.x0.begin(), params.x0.end(), out.x(0).begin());
  const double dt = path.grid().dt();
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const Vector next = forward_em_step(out.x(k), path.dW(k), path.dWhat(k), params, dt);
    std::copy(next.begin(), next.end(), out.x(k + 1).begin());
  }
  return out;
}

WrightFisherParams WrightFisherParams::for_one_minus_radius(const ModelParams& params) {
  const double dnu2 = static_cast<double>(params.d) * params.nu * params.nu;
  return {2.0 * params.kappa, dnu2 + 2.0 * params.kappa, 2.0 * params.nu, 1.0 - squared_norm(params.x0)};
}

double wf_step(double y, const WrightFisherParams& wf, double dN, double dt) noexcept {
  const double next = y + (wf.a - wf.b * y) * dt + wf.gamma * std::sqrt(std::abs(y * (1.0 - y))) * dN;
  return std::clamp(next, 0.0, 1.0);
}

std::vector<double> simulate_wf(const WrightFisherParams& wf, const BrownianPath& path) {
  if (path.d() < 1) throw Error(ErrorKind::DimensionMismatch, "Wright-Fisher needs one noise component");
  std::vector<double> out(path.steps() + 1);
  out[0] = wf.y0;
  const double dt = path.grid().dt();
  for (std::size_t k = 0; k < path.steps(); ++k) out[k + 1] = wf_step(out[k], wf, path.dW(k)[0], dt);
  return out;
}

}  // namespace ballsde
