#include <doctest.h>

#include <cmath>
#include <random>

#include "ballsde/error.hpp"
#include "ballsde/model.hpp"
#include "oracles.hpp"

using namespace ballsde;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected ballsde::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("validate classifies the regime") {
  SUBCASE("kappa = 13 satisfies the rate assumption") {
    const auto r = validate(ModelParams::isotropic(2, 13.0, kSqrt2, {0.7, 0.7}, 1.0));
    CHECK(r.ratio == doctest::Approx(6.5).epsilon(1e-15));
    CHECK(r.rate_theorem);
    CHECK(r.backward_solvable);
    CHECK(r.pathwise_unique);
  }
  SUBCASE("kappa = 2 is pathwise unique but not rate certified") {
    const auto r = validate(ModelParams::isotropic(2, 2.0, kSqrt2, {0.7, 0.7}, 1.0));
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(r.rate_theorem);
    CHECK(r.pathwise_unique);
    CHECK(r.swart_monotone);
  }
  SUBCASE("kappa = 0") {
    const auto r = validate(ModelParams::isotropic(3, 0.0, 1.0, {0.1, 0.0, 0.0}, 1.0));
    CHECK(r.ratio == 0.0);
    CHECK_FALSE(r.backward_solvable);
    CHECK_FALSE(r.pathwise_unique);
  }
  SUBCASE("rotation generator accepted as skew") {
    auto p = ModelParams::isotropic(2, 13.0, kSqrt2, {0.7, 0.7}, 1.0);
    p.A0 = DenseMatrix{{0, 1}, {-1, 0}};
    CHECK_NOTHROW(validate(p));
    CHECK_FALSE(validate(p).swart_monotone);
  }
  SUBCASE("distance regime needs nu == sqrt(2) exactly") {
    auto p = ModelParams::isotropic(2, 1.0, std::nextafter(kSqrt2, 2.0), {0.0, 0.0}, 1.0);
    CHECK_FALSE(validate(p).swart_monotone);
    p.nu = std::sqrt(2.0);
    CHECK(validate(p).swart_monotone);
    p.A = {DenseMatrix::zeros(2, 2)};
    CHECK(validate(p).swart_monotone);
    p.A = {DenseMatrix{{0, 1e-300}, {-1e-300, 0}}};
    CHECK_FALSE(validate(p).swart_monotone);
  }
}

TEST_CASE("validate rejects invalid models") {
  auto base = ModelParams::isotropic(2, 13.0, kSqrt2, {0.7, 0.7}, 1.0);
  SUBCASE("non-skew drift matrix") {
    auto p = base;
    p.A0 = DenseMatrix{{0, 1}, {-1, 1e-17}};
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::NonSkewMatrix);
  }
  SUBCASE("non-skew noise matrix") {
    auto p = base;
    p.A = {DenseMatrix{{0, 1}, {1, 0}}};
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::NonSkewMatrix);
  }
  SUBCASE("initial point on the sphere") {
    auto p = base;
    p.x0 = {0.6, 0.8};
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::InitialPointOnBoundary);
  }
  SUBCASE("non-positive parameters") {
    auto p = base;
    p.nu = 0.0;
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::NonPositiveParam);
    p = base;
    p.T = -1.0;
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::NonPositiveParam);
    p = base;
    p.d = 1;
    p.x0 = {0.1};
    p.A0 = DenseMatrix::zeros(1, 1);
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::NonPositiveParam);
  }
  SUBCASE("dimension mismatch") {
    auto p = base;
    p.A0 = DenseMatrix::zeros(3, 3);
    CHECK(kind_of([&] { validate(p); }) == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("regime flags follow threshold arithmetic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> kappa(0.0, 20.0);
  std::uniform_real_distribution<double> nu(0.1, 3.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto p = ModelParams::isotropic(2, kappa(rng), nu(rng), {0.1, 0.2}, 1.0);
    const auto r = validate(p);
    CHECK(r.ratio == p.kappa / (p.nu * p.nu));
    CHECK(r.rate_theorem == (r.ratio > 6.0));
    CHECK(r.backward_solvable == (r.ratio > 0.5));
    CHECK(r.pathwise_unique == (r.ratio > std::sqrt(2.0) - 1.0));
    if (r.rate_theorem) CHECK(r.backward_solvable);
    if (r.backward_solvable) CHECK(r.pathwise_unique);
    const auto again = validate(p);
    CHECK(again.ratio == r.ratio);
    CHECK(again.rate_theorem == r.rate_theorem);
  }
}

TEST_CASE("lift") {
  SUBCASE("center") { CHECK(lift(Vector{0, 0, 0}).y0 == 1.0); }
  SUBCASE("boundary") { CHECK(lift(Vector{0.6, 0.8}).y0 == doctest::Approx(0.0).epsilon(1e-7)); }
  SUBCASE("reference initial point") {
    const auto s = lift(Vector{0.7, 0.7});
    CHECK(s.y0 == doctest::Approx(std::sqrt(0.02)).epsilon(1e-13));
    CHECK(s.x == Vector{0.7, 0.7});
  }
  SUBCASE("slightly outside is clamped, further outside is an error") {
    CHECK(lift(Vector{1.0 + 1e-13, 0.0}).y0 == 0.0);
    CHECK_THROWS_AS(lift(Vector{1.0 + 1e-9, 0.0}), Error);
  }
  SUBCASE("lands on the upper hemisphere") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10000; ++trial) {
      const auto x = oracle::random_in_ball(2 + trial % 5, rng);
      const auto s = lift(x);
      CHECK(std::abs(s.y0 * s.y0 + squared_norm(s.x) - 1.0) <= 1e-12);
      CHECK(s.y0 >= 0.0);
      CHECK(s.y0 <= 1.0);
    }
  }
}

TEST_CASE("time grid") {
  const TimeGrid g(1.0, 3);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(3) == 1.0);
  CHECK(g.dt() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(TimeGrid(1.0, 0), Error);
  CHECK_THROWS_AS(TimeGrid(0.0, 4), Error);
}
