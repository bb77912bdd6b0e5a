#pragma once

// Test-only reference computations. Nothing here calls into the scheme or
// moment code paths it is used to check.

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

/// One backward step for d = 2, m = 0, A0 = 0, written out scalar by scalar.
struct Step2 {
  double y0;
  double x1;
  double x2;
};

inline Step2 backward_step_2d(double y0, double x1, double x2, double dw1, double dw2, double kappa, double nu,
                              double dt) {
  const double c = kappa - nu * nu / 2.0;
  const double b = y0 - nu * (x1 * dw1 + x2 * dw2) - (c + 2.0 * nu * nu / 2.0) * y0 * dt;
  const double y_next = 0.5 * (b + std::sqrt(b * b + 4.0 * c * dt));
  return {y_next, x1 - kappa * x1 * dt + nu * y0 * dw1, x2 - kappa * x2 * dt + nu * y0 * dw2};
}

/// Classical RK4 on m' = G m for the bidiagonal radial moment system
/// m_k' = alpha_k m_{k-1} - beta_k m_k, built from the coefficient formulas.
inline std::vector<double> radial_moments_rk4(std::size_t d, double kappa, double nu, double r0_sq, double t,
                                              std::size_t K, std::size_t steps) {
  const double nu2 = nu * nu;
  const double dnu2 = static_cast<double>(d) * nu2;
  std::vector<double> alpha(K + 1, 0.0);
  std::vector<double> beta(K + 1, 0.0);
  for (std::size_t j = 1; j <= K; ++j) {
    const double k = static_cast<double>(j);
    alpha[j] = k * dnu2 + 2.0 * nu2 * k * (k - 1.0);
    beta[j] = k * (dnu2 + 2.0 * kappa) + 2.0 * nu2 * k * (k - 1.0);
  }
  auto rhs = [&](const std::vector<double>& m) {
    std::vector<double> out(K + 1, 0.0);
    for (std::size_t j = 1; j <= K; ++j) out[j] = alpha[j] * m[j - 1] - beta[j] * m[j];
    return out;
  };
  std::vector<double> m(K + 1);
  m[0] = 1.0;
  for (std::size_t j = 1; j <= K; ++j) m[j] = m[j - 1] * r0_sq;
  const double h = t / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    auto axpy = [&](const std::vector<double>& k, double a) {
      std::vector<double> out = m;
      for (std::size_t j = 0; j <= K; ++j) out[j] += a * k[j];
      return out;
    };
    const auto k1 = rhs(m);
    const auto k2 = rhs(axpy(k1, h / 2));
    const auto k3 = rhs(axpy(k2, h / 2));
    const auto k4 = rhs(axpy(k3, h));
    for (std::size_t j = 0; j <= K; ++j) m[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return m;
}

/// Random d x d skew matrix with entries in [-scale, scale].
template <class Rng>
std::vector<double> random_skew(std::size_t d, double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> a(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      a[i * d + j] = u(rng);
      a[j * d + i] = -a[i * d + j];
    }
  return a;
}

/// Uniform point in the closed unit ball of R^d (rejection sampling).
template <class Rng>
std::vector<double> random_in_ball(std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<double> x(d);
    double r2 = 0.0;
    for (auto& v : x) {
      v = u(rng);
      r2 += v * v;
    }
    if (r2 <= 1.0) return x;
  }
}

}  // namespace oracle
