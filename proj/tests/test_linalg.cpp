#include <doctest.h>

#include <cmath>
#include <random>

#include "ballsde/error.hpp"
#include "ballsde/linalg.hpp"
#include "oracles.hpp"

using namespace ballsde;

TEST_CASE("matvec") {
  SUBCASE("identity") {
    const Vector x{0.3, -1.2, 4.0};
    CHECK(matvec(DenseMatrix::identity(3), x) == x);
  }
  SUBCASE("rotation generator") {
    const DenseMatrix a{{0, 1}, {-1, 0}};
    CHECK(matvec(a, Vector{1, 0}) == Vector{0, -1});
  }
  SUBCASE("scaled generator at the reference point") {
    const DenseMatrix a{{0, 10}, {-10, 0}};
    const Vector y = matvec(a, Vector{0.7, 0.7});
    CHECK(y[0] == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(-7.0).epsilon(1e-15));
  }
  SUBCASE("dimension mismatch") {
    const DenseMatrix a{{0, 1}, {-1, 0}};
    CHECK_THROWS_AS(matvec(a, Vector{1, 2, 3}), Error);
  }
}

TEST_CASE("skew identities") {
  SUBCASE("rotation generator") {
    const auto s = skew_identities_check(DenseMatrix{{0, 1}, {-1, 0}}, Vector{1, 0});
    CHECK(s.inner == 0.0);
    CHECK(s.square_inner == -1.0);
    CHECK(s.neg_norm == -1.0);
  }
  SUBCASE("zero matrix") {
    const auto s = skew_identities_check(DenseMatrix::zeros(3, 3), Vector{1, 2, 3});
    CHECK(s.inner == 0.0);
    CHECK(s.square_inner == 0.0);
    CHECK(s.neg_norm == 0.0);
  }
  SUBCASE("random skew matrices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> dim(2, 6);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t d = dim(rng);
      const DenseMatrix a(d, d, oracle::random_skew(d, 3.0, rng));
      REQUIRE(a.is_skew());
      Vector x(d);
      for (auto& v : x) v = normal(rng);
      const auto s = skew_identities_check(a, x);
      const double a_norm = frobenius(a);
      const double x2 = squared_norm(x);
      CHECK(std::abs(s.inner) <= 1e-12 * a_norm * x2);
      CHECK(std::abs(s.square_inner - s.neg_norm) <= 1e-10 * a_norm * a_norm * x2);
    }
  }
}

TEST_CASE("expm") {
  SUBCASE("t = 0 gives the identity") {
    const DenseMatrix g{{1, 2}, {3, 4}};
    CHECK(expm(g, 0.0) == DenseMatrix::identity(2));
  }
  SUBCASE("diagonal") {
    const DenseMatrix g{{-2, 0, 0}, {0, 0.5, 0}, {0, 0, 3}};
    const DenseMatrix e = expm(g, 1.5);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx(std::exp(0.75)).epsilon(1e-13));
    CHECK(e(2, 2) == doctest::Approx(std::exp(4.5)).epsilon(1e-13));
    CHECK(e(0, 1) == 0.0);
  }
  SUBCASE("nilpotent series terminates") {
    const DenseMatrix e = expm(DenseMatrix{{0, 1}, {0, 0}}, 1.0);
    CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e(1, 0) == 0.0);
    CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("rotation") {
    const DenseMatrix e = expm(DenseMatrix{{0, 1}, {-1, 0}}, 2.0);
    CHECK(e(0, 0) == doctest::Approx(std::cos(2.0)).epsilon(1e-13));
    CHECK(e(0, 1) == doctest::Approx(std::sin(2.0)).epsilon(1e-13));
  }
  SUBCASE("non-square") { CHECK_THROWS_AS(expm(DenseMatrix(2, 3), 1.0), Error); }
  SUBCASE("semigroup") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> time(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + trial % 7;
      DenseMatrix g(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = u(rng);
      g = (5.0 / frobenius(g) * u(rng)) * g;
      const double s = time(rng);
      const double t = time(rng);
      const DenseMatrix whole = expm(g, s + t);
      const DenseMatrix split = expm(g, s) * expm(g, t);
      CHECK(frobenius(whole - split) <= 1e-8 * frobenius(whole));
    }
  }
  SUBCASE("finite difference recovers the generator") {
    const DenseMatrix g{{-1, 2, 0}, {0.5, -3, 1}, {0, 4, -2}};
    auto fd_error = [&](double h) { return frobenius((1.0 / h) * (expm(g, h) - DenseMatrix::identity(3)) - g); };
    const double coarse = fd_error(1e-3);
    const double fine = fd_error(1e-4);
    CHECK(coarse / fine == doctest::Approx(10.0).epsilon(0.05));
  }
}
