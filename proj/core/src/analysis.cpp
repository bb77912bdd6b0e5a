#include "ballsde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ballsde/error.hpp"
#include "ballsde/parallel.hpp"

namespace ballsde {

namespace {

struct LevelSums {
  // slots 0..n: squared error at t_k; slot n + 1: max over k.
  MomentSums lifted;
  MomentSums projected;
};

struct StrongErrorAcc {
  std::vector<LevelSums> levels;
  double min_y0 = std::numeric_limits<double>::infinity();
};

ErrorReport finish_report(const std::vector<std::size_t>& n_values, const std::vector<MomentSums>& sums,
                          std::size_t paths, std::size_t ref_n, bool warning) {
  ErrorReport r;
  r.n_values = n_values;
  r.paths = paths;
  r.ref_n = ref_n;
  r.regime_warning = warning;
  for (std::size_t l = 0; l < n_values.size(); ++l) {
    const std::size_t n = n_values[l];
    std::size_t worst = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (sums[l].estimate(k).mean > sums[l].estimate(worst).mean) worst = k;
    }
    auto root = [](Estimate e) {
      const double v = std::sqrt(e.mean);
      return std::pair{v, v > 0.0 ? e.se / (2.0 * v) : 0.0};
    };
    const auto [mom, mom_se] = root(sums[l].estimate(worst));
    const auto [mam, mam_se] = root(sums[l].estimate(n + 1));
    r.err_max_of_mean.push_back(mom);
    r.se_max_of_mean.push_back(mom_se);
    r.err_mean_of_max.push_back(mam);
    r.se_mean_of_max.push_back(mam_se);
  }
  const std::vector<double> ns(n_values.begin(), n_values.end());
  if (auto fit = fit_loglog(ns, r.err_max_of_mean)) {
    r.slope_max_of_mean = fit->slope;
    r.slope_stderr_max_of_mean = fit->slope_stderr;
  }
  if (auto fit = fit_loglog(ns, r.err_mean_of_max)) {
    r.slope_mean_of_max = fit->slope;
    r.slope_stderr_mean_of_max = fit->slope_stderr;
  }
  return r;
}

std::size_t nearest_step(const TimeGrid& grid, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sample times must be >= 0");
  const auto k = static_cast<std::size_t>(std::llround(t / grid.dt()));
  return std::min(k, grid.steps());
}

}  // namespace

StrongErrorResult strong_error(const ModelParams& params, const StrongErrorOptions& options) {
  const RegimeReport regime = validate(params);
  const auto& ns = options.n_values;
  if (ns.empty()) throw Error(ErrorKind::InvalidArgument, "empty n ladder");
  if (!std::is_sorted(ns.begin(), ns.end(), std::less_equal<>()) || ns.front() == 0) {
    throw Error(ErrorKind::InvalidArgument, "n ladder must be positive and strictly increasing");
  }
  if (options.mc.paths < 100) throw Error(ErrorKind::InvalidArgument, "strong error needs at least 100 paths");
  for (std::size_t n : ns) {
    if (options.ref_n % n != 0) {
      throw Error(ErrorKind::IndivisibleRefinement,
                  std::to_string(n) + " does not divide reference steps " + std::to_string(options.ref_n));
    }
  }

  const TimeGrid fine_grid(params.T, options.ref_n);
  const std::size_t d = params.d;

  auto make = [&] {
    StrongErrorAcc acc;
    for (std::size_t n : ns) acc.levels.push_back({MomentSums(n + 2), MomentSums(n + 2)});
    return acc;
  };

  auto per_path = [&](std::size_t i, StrongErrorAcc& acc) {
    const BrownianPath fine = sample_path({options.mc.seed, i}, fine_grid, d, params.m());
    const BackwardPath reference = simulate_backward(params, fine);
    for (std::size_t k = 0; k < reference.size(); ++k) acc.min_y0 = std::min(acc.min_y0, reference.y0(k));

    Vector pa(d);
    Vector pb(d);
    for (std::size_t l = 0; l < ns.size(); ++l) {
      const std::size_t n = ns[l];
      const std::size_t r = options.ref_n / n;
      const BackwardPath coarse = r == 1 ? reference : simulate_backward(params, coarsen(fine, r));
      LevelSums& sums = acc.levels[l];
      double max_lifted = 0.0;
      double max_projected = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        const auto ref_row = reference.row(k * r);
        const auto row = coarse.row(k);
        acc.min_y0 = std::min(acc.min_y0, row[0]);
        double e_lifted = 0.0;
        for (std::size_t j = 0; j <= d; ++j) e_lifted += (ref_row[j] - row[j]) * (ref_row[j] - row[j]);
        std::copy(ref_row.begin() + 1, ref_row.end(), pa.begin());
        std::copy(row.begin() + 1, row.end(), pb.begin());
        project_in_place(pa);
        project_in_place(pb);
        double e_projected = 0.0;
        for (std::size_t j = 0; j < d; ++j) e_projected += (pa[j] - pb[j]) * (pa[j] - pb[j]);
        sums.lifted.add(k, e_lifted);
        sums.projected.add(k, e_projected);
        max_lifted = std::max(max_lifted, e_lifted);
        max_projected = std::max(max_projected, e_projected);
      }
      sums.lifted.add(n + 1, max_lifted);
      sums.projected.add(n + 1, max_projected);
      ++sums.lifted.count;
      ++sums.projected.count;
    }
  };

  auto combine = [](StrongErrorAcc& into, const StrongErrorAcc& from) {
    for (std::size_t l = 0; l < into.levels.size(); ++l) {
      into.levels[l].lifted.merge(from.levels[l].lifted);
      into.levels[l].projected.merge(from.levels[l].projected);
    }
    into.min_y0 = std::min(into.min_y0, from.min_y0);
  };

  const StrongErrorAcc total =
      deterministic_reduce<StrongErrorAcc>(options.mc.paths, options.mc.threads, make, per_path, combine);

  std::vector<MomentSums> lifted;
  std::vector<MomentSums> projected;
  for (const auto& level : total.levels) {
    lifted.push_back(level.lifted);
    projected.push_back(level.projected);
  }
  const bool warning = !regime.rate_theorem;
  return {finish_report(ns, lifted, options.mc.paths, options.ref_n, warning),
          finish_report(ns, projected, options.mc.paths, options.ref_n, warning), total.min_y0};
}

double quarter_rate_constant(const ErrorReport& report) {
  if (report.n_values.empty()) throw Error(ErrorKind::InvalidArgument, "empty report");
  return report.err_mean_of_max.front() * std::pow(static_cast<double>(report.n_values.front()), 0.25);
}

double analytic_second_moment(const ModelParams& params, double t) {
  const double dnu2 = static_cast<double>(params.d) * params.nu * params.nu;
  const double rate = dnu2 + 2.0 * params.kappa;
  const double s = dnu2 / rate;
  return s + (squared_norm(params.x0) - s) * std::exp(-rate * t);
}

double gronwall_decay_bound(const ModelParams& params, double t) {
  const double dnu2 = static_cast<double>(params.d) * params.nu * params.nu;
  return (squared_norm(params.x0) + dnu2 * t) * std::exp(-(dnu2 + 2.0 * params.kappa) * t);
}

GeneratorMatrix radial_generator(const ModelParams& params, std::size_t K) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "generator truncation K must be >= 1");
  const double nu2 = params.nu * params.nu;
  const double dnu2 = static_cast<double>(params.d) * nu2;
  GeneratorMatrix gen{K, DenseMatrix(K + 1, K + 1)};
  for (std::size_t j = 1; j <= K; ++j) {
    const double k = static_cast<double>(j);
    const double curvature = 2.0 * nu2 * k * (k - 1.0);
    gen.G(j, j - 1) = k * dnu2 + curvature;
    gen.G(j, j) = -(k * (dnu2 + 2.0 * params.kappa) + curvature);
  }
  return gen;
}

std::vector<double> radial_moments(const ModelParams& params, double t, std::size_t K) {
  const GeneratorMatrix gen = radial_generator(params, K);
  const double r2 = squared_norm(params.x0);
  Vector initial(K + 1);
  initial[0] = 1.0;
  for (std::size_t j = 1; j <= K; ++j) initial[j] = initial[j - 1] * r2;
  return matvec(expm(gen.G, t), initial);
}

double radial_moment(const ModelParams& params, std::size_t k, double t, std::size_t K) {
  if (k > K) {
    throw Error(ErrorKind::DegreeExceeded,
                "moment order " + std::to_string(k) + " exceeds truncation " + std::to_string(K));
  }
  if (k == 0) return 1.0;
  return radial_moments(params, t, K)[k];
}

std::vector<std::vector<Estimate>> projected_moments_mc(const ModelParams& params, std::size_t n,
                                                        const std::vector<std::size_t>& sample_steps,
                                                        std::size_t K, const MonteCarloOptions& mc) {
  validate(params);
  for (std::size_t s : sample_steps) {
    if (s > n) throw Error(ErrorKind::InvalidArgument, "sample step beyond the grid");
  }
  const TimeGrid grid(params.T, n);
  const std::size_t slots = sample_steps.size() * K;

  auto per_path = [&](std::size_t i, MomentSums& acc) {
    const BackwardPath path = simulate_backward(params, sample_path({mc.seed, i}, grid, params.d, params.m()));
    Vector x(params.d);
    for (std::size_t s = 0; s < sample_steps.size(); ++s) {
      const auto src = path.x(sample_steps[s]);
      std::copy(src.begin(), src.end(), x.begin());
      project_in_place(x);
      const double r2 = squared_norm(x);
      double power = 1.0;
      for (std::size_t j = 1; j <= K; ++j) {
        power *= r2;
        acc.add(s * K + j - 1, power);
      }
    }
    ++acc.count;
  };
  const MomentSums total = deterministic_reduce<MomentSums>(
      mc.paths, mc.threads, [&] { return MomentSums(slots); }, per_path,
      [](MomentSums& a, const MomentSums& b) { a.merge(b); });

  std::vector<std::vector<Estimate>> out(sample_steps.size(), std::vector<Estimate>(K));
  for (std::size_t s = 0; s < sample_steps.size(); ++s)
    for (std::size_t j = 0; j < K; ++j) out[s][j] = total.estimate(s * K + j);
  return out;
}

Estimate wf_terminal_mean(const WrightFisherParams& wf, double T, std::size_t n, const MonteCarloOptions& mc) {
  const TimeGrid grid(T, n);
  auto per_path = [&](std::size_t i, MomentSums& acc) {
    const BrownianPath path = sample_path({mc.seed, i}, grid, 1, 0);
    double y = wf.y0;
    for (std::size_t k = 0; k < n; ++k) y = wf_step(y, wf, path.dW(k)[0], grid.dt());
    acc.add(0, y);
    ++acc.count;
  };
  const MomentSums total = deterministic_reduce<MomentSums>(
      mc.paths, mc.threads, [] { return MomentSums(1); }, per_path,
      [](MomentSums& a, const MomentSums& b) { a.merge(b); });
  return total.estimate(0);
}

double forward_em_exit_fraction(const ModelParams& params, std::size_t n, const MonteCarloOptions& mc) {
  validate(params);
  const TimeGrid grid(params.T, n);
  auto per_path = [&](std::size_t i, MomentSums& acc) {
    const VectorPath path = simulate_forward_em(params, sample_path({mc.seed, i}, grid, params.d, params.m()));
    bool left = false;
    for (std::size_t k = 0; k < path.size() && !left; ++k) left = squared_norm(path.x(k)) > 1.0;
    acc.add(0, left ? 1.0 : 0.0);
    ++acc.count;
  };
  const MomentSums total = deterministic_reduce<MomentSums>(
      mc.paths, mc.threads, [] { return MomentSums(1); }, per_path,
      [](MomentSums& a, const MomentSums& b) { a.merge(b); });
  return total.estimate(0).mean;
}

InverseMomentReport inverse_moment_check(const ModelParams& params, double q, const std::vector<double>& t_samples,
                                         std::size_t n, const MonteCarloOptions& mc) {
  const RegimeReport regime = validate(params);
  if (regime.ratio < 1.0) throw Error(ErrorKind::RegimeViolation, "inverse moment check needs kappa/nu^2 >= 1");
  if (!(q >= 0.0)) throw Error(ErrorKind::InvalidArgument, "q must be >= 0");
  if (q >= regime.ratio) throw Error(ErrorKind::RegimeViolation, "q must be below kappa/nu^2");

  const TimeGrid grid(params.T, n);
  std::vector<std::size_t> steps;
  for (double t : t_samples) steps.push_back(nearest_step(grid, t));
  const std::size_t S = steps.size();
  const std::size_t half = mc.paths / 2;

  // slots [0, S): all paths; [S, 2S): first half.
  auto per_path = [&](std::size_t i, MomentSums& acc) {
    const BackwardPath path = simulate_backward(params, sample_path({mc.seed, i}, grid, params.d, params.m()));
    for (std::size_t s = 0; s < S; ++s) {
      const double v = std::pow(path.y0(steps[s]), -q);
      acc.add(s, v);
      if (i < half) acc.add(S + s, v);
    }
    ++acc.count;
  };
  const MomentSums total = deterministic_reduce<MomentSums>(
      mc.paths, mc.threads, [&] { return MomentSums(2 * S); }, per_path,
      [](MomentSums& a, const MomentSums& b) { a.merge(b); });

  InverseMomentReport report;
  report.stable = true;
  for (std::size_t s = 0; s < S; ++s) {
    report.times.push_back(grid.time(steps[s]));
    const Estimate full = total.estimate(s);
    const double half_mean = half == 0 ? full.mean : total.sum[S + s] / static_cast<double>(half);
    report.estimate.push_back(full);
    report.half_estimate.push_back(half_mean);
    report.max_estimate = std::max(report.max_estimate, full.mean);
    const double ratio = full.mean / half_mean;
    if (std::abs(std::log(ratio)) > std::abs(std::log(report.worst_ratio))) report.worst_ratio = ratio;
    if (!(ratio >= 0.8 && ratio <= 1.25)) report.stable = false;
  }
  return report;
}

double increment_moment(const BackwardPath& path, std::size_t coordinate, std::size_t s_step, std::size_t t_step,
                        double q) {
  if (coordinate > path.d()) throw Error(ErrorKind::DimensionMismatch, "coordinate out of range");
  if (s_step >= path.size() || t_step >= path.size()) throw Error(ErrorKind::InvalidArgument, "step out of range");
  return std::pow(std::abs(path.row(t_step)[coordinate] - path.row(s_step)[coordinate]), q);
}

HolderReport holder_check(const ModelParams& params, double q, std::size_t n, std::size_t levels,
                          const MonteCarloOptions& mc) {
  const RegimeReport regime = validate(params);
  if (!(q >= 2.0) || q >= regime.ratio) throw Error(ErrorKind::RegimeViolation, "holder check needs 2 <= q < kappa/nu^2");
  const TimeGrid grid(params.T, n);
  std::vector<std::size_t> lag_steps;
  for (std::size_t L = 1; lag_steps.size() < levels && L <= n; L *= 2) lag_steps.push_back(L);
  if (lag_steps.empty()) throw Error(ErrorKind::InvalidArgument, "holder check needs at least one lag");
  const std::size_t coords = params.d + 1;

  auto per_path = [&](std::size_t i, MomentSums& acc) {
    const BackwardPath path = simulate_backward(params, sample_path({mc.seed, i}, grid, params.d, params.m()));
    for (std::size_t l = 0; l < lag_steps.size(); ++l) {
      const std::size_t L = lag_steps[l];
      const std::size_t windows = n / L;
      for (std::size_t c = 0; c < coords; ++c) {
        double s = 0.0;
        for (std::size_t w = 0; w < windows; ++w) s += increment_moment(path, c, w * L, (w + 1) * L, q);
        acc.add(l * coords + c, s / static_cast<double>(windows));
      }
    }
    ++acc.count;
  };
  const MomentSums total = deterministic_reduce<MomentSums>(
      mc.paths, mc.threads, [&] { return MomentSums(lag_steps.size() * coords); }, per_path,
      [](MomentSums& a, const MomentSums& b) { a.merge(b); });

  HolderReport report;
  for (std::size_t l = 0; l < lag_steps.size(); ++l) {
    report.lags.push_back(static_cast<double>(lag_steps[l]) * grid.dt());
    std::vector<double> row;
    for (std::size_t c = 0; c < coords; ++c) row.push_back(total.estimate(l * coords + c).mean);
    report.moments.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < coords; ++c) {
    std::vector<double> column;
    for (const auto& row : report.moments) column.push_back(row[c]);
    const auto fit = fit_loglog(report.lags, column);
    report.slopes.push_back(fit ? fit->slope : std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

DistanceReport distance_monotonicity(const ModelParams& params, const Vector& x0_a, const Vector& x0_b,
                                     std::size_t n, std::uint64_t seed) {
  ModelParams pa = params;
  ModelParams pb = params;
  pa.x0 = x0_a;
  pb.x0 = x0_b;
  if (!validate(pa).swart_monotone || !validate(pb).swart_monotone) {
    throw Error(ErrorKind::RegimeViolation, "distance experiment needs nu = sqrt(2), kappa >= 1 and no skew terms");
  }
  const TimeGrid grid(params.T, n);
  const BrownianPath noise = sample_path({seed, 0}, grid, params.d, params.m());
  const BackwardPath ya = simulate_backward(pa, noise, RootPolicy::AdmitBoundary);
  const BackwardPath yb = simulate_backward(pb, noise, RootPolicy::AdmitBoundary);

  DistanceReport report;
  report.tolerance = 10.0 * std::pow(grid.dt(), 0.25);
  report.times.reserve(n + 1);
  report.distance.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto a = ya.row(k);
    const auto b = yb.row(k);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    report.times.push_back(grid.time(k));
    report.distance.push_back(std::sqrt(s));
    if (k > 0) {
      const double step = report.distance[k] - report.distance[k - 1];
      if (step > 0.0) ++report.increases;
      if (step > report.tolerance) ++report.exceedances;
      report.max_increase = std::max(report.max_increase, step);
    }
  }
  return report;
}

}  // namespace ballsde
