#include "ballsde/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ballsde/error.hpp"

namespace ballsde {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSkewMatrix: return "NonSkewMatrix";
    case ErrorKind::InitialPointOnBoundary: return "InitialPointOnBoundary";
    case ErrorKind::NonPositiveParam: return "NonPositiveParam";
    case ErrorKind::OutsideBall: return "OutsideBall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::IndivisibleRefinement: return "IndivisibleRefinement";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::DegreeExceeded: return "DegreeExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ModelParams ModelParams::isotropic(std::size_t d, double kappa, double nu, Vector x0, double T) {
  ModelParams p;
  p.d = d;
  p.kappa = kappa;
  p.nu = nu;
  p.A0 = DenseMatrix::zeros(d, d);
  p.x0 = std::move(x0);
  p.T = T;
  return p;
}

RegimeReport validate(const ModelParams& params) {
  if (params.d < 2) throw Error(ErrorKind::NonPositiveParam, "dimension d must be >= 2");
  if (!(params.nu > 0.0)) throw Error(ErrorKind::NonPositiveParam, "nu must be > 0");
  if (!(params.T > 0.0)) throw Error(ErrorKind::NonPositiveParam, "T must be > 0");
  if (!(params.kappa >= 0.0)) throw Error(ErrorKind::NonPositiveParam, "kappa must be >= 0");
  if (params.x0.size() != params.d) throw Error(ErrorKind::DimensionMismatch, "x0 must have d entries");

  auto check = [&](const DenseMatrix& a, const std::string& name) {
    if (a.rows() != params.d || a.cols() != params.d) {
      throw Error(ErrorKind::DimensionMismatch, name + " must be d x d");
    }
    if (!a.is_skew()) throw Error(ErrorKind::NonSkewMatrix, name + " is not skew-symmetric");
  };
  check(params.A0, "A0");
  for (std::size_t p = 0; p < params.A.size(); ++p) check(params.A[p], "A[" + std::to_string(p) + "]");

  if (!(norm(params.x0) < 1.0)) throw Error(ErrorKind::InitialPointOnBoundary, "|x0| must be < 1");

  RegimeReport r;
  r.ratio = params.ratio();
  r.pathwise_unique = r.ratio > std::numbers::sqrt2 - 1.0;
  r.backward_solvable = r.ratio > 0.5;
  r.rate_theorem = r.ratio > 6.0;
  r.swart_monotone = params.kappa >= 1.0 && params.nu == kSqrt2 && params.A0.is_zero() &&
                     std::all_of(params.A.begin(), params.A.end(), [](const DenseMatrix& a) { return a.is_zero(); });
  return r;
}

AugmentedState lift(std::span<const double> x) {
  const double r2 = squared_norm(x);
  if (std::sqrt(r2) > 1.0 + kLiftTolerance) throw Error(ErrorKind::OutsideBall, "cannot lift a point outside the ball");
  return {std::sqrt(std::max(0.0, 1.0 - r2)), Vector(x.begin(), x.end())};
}

TimeGrid::TimeGrid(double T, std::size_t n) : T_(T), n_(n), dt_(n == 0 ? 0.0 : T / static_cast<double>(n)) {
  if (!(T > 0.0) || n == 0) throw Error(ErrorKind::InvalidGrid, "grid needs T > 0 and n >= 1");
}

}  // namespace ballsde
