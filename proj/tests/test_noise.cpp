#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "ballsde/error.hpp"
#include "ballsde/noise.hpp"
#include "ballsde/philox.hpp"

using namespace ballsde;

TEST_CASE("philox4x32-10 known answers") {
  // Random123 kat_vectors.
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("normal quantile") {
  // Newton refinement against the erfc-based CDF as the reference.
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.99, 0.9999, 1.0 - 1e-8}) {
    const double z = normal_quantile(p);
    const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    const double refined = z - (cdf(z) - p) / density;
    CHECK(std::abs(z - refined) <= 1.2e-9 * std::abs(refined) + 1e-15);
  }
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.2) == doctest::Approx(-normal_quantile(0.8)).epsilon(1e-14));
}

TEST_CASE("uniforms lie in the open unit interval") {
  for (std::uint32_t k = 0; k < 10000; ++k) {
    const double u = uniform_at({42, 7}, k, k % 3);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sample_path") {
  const TimeGrid grid(1.0, 4);
  SUBCASE("deterministic") {
    CHECK(sample_path({9, 3}, grid, 2, 1) == sample_path({9, 3}, grid, 2, 1));
    CHECK_FALSE(sample_path({9, 3}, grid, 2, 1) == sample_path({9, 4}, grid, 2, 1));
    CHECK_FALSE(sample_path({9, 3}, grid, 2, 1) == sample_path({10, 3}, grid, 2, 1));
  }
  SUBCASE("every increment is addressable on its own") {
    const TimeGrid g(2.0, 50);
    const auto path = sample_path({123, 456}, g, 3, 2);
    const double scale = std::sqrt(g.dt());
    for (std::uint32_t k = 0; k < 50; ++k) {
      for (std::uint32_t j = 0; j < 3; ++j) {
        CHECK(path.dW(k)[j] == quantize_increment(scale * standard_normal_at({123, 456}, k, j)));
      }
      for (std::uint32_t p = 0; p < 2; ++p) {
        CHECK(path.dWhat(k)[p] == quantize_increment(scale * standard_normal_at({123, 456}, k, 3 + p)));
      }
    }
  }
  SUBCASE("increments are N(0, dt)") {
    const std::size_t n = 1'000'000;
    const double dt = 0.01;
    const auto path = sample_path({2024, 0}, TimeGrid(dt * n, n), 1, 0);
    const auto inc = path.all_dW();
    const double mean = std::accumulate(inc.begin(), inc.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : inc) ss += (v - mean) * (v - mean);
    const double var = ss / (n - 1);
    CHECK(std::abs(mean) < 4.0 * std::sqrt(dt / n));
    CHECK(std::abs(var / dt - 1.0) < 0.01);
  }
}

TEST_CASE("coarsen") {
  SUBCASE("r = 1 is the identity") {
    const auto path = sample_path({1, 1}, TimeGrid(1.0, 8), 2, 1);
    CHECK(coarsen(path, 1) == path);
  }
  SUBCASE("pairs of increments") {
    const BrownianPath path(TimeGrid(1.0, 4), 1, 0, {0.5, 0.25, -1.0, 0.125}, {});
    const auto c = coarsen(path, 2);
    CHECK(c.steps() == 2);
    CHECK(c.dW(0)[0] == 0.75);
    CHECK(c.dW(1)[0] == -0.875);
    CHECK(c.grid().dt() == 0.5);
  }
  SUBCASE("indivisible") {
    const auto path = sample_path({1, 1}, TimeGrid(1.0, 6), 2, 0);
    CHECK_THROWS_AS(coarsen(path, 4), Error);
    CHECK_THROWS_AS(coarsen(path, 0), Error);
  }
  SUBCASE("cumulative sums agree bit-exactly at shared grid points") {
    const std::size_t n = 8192;
    const auto fine = sample_path({77, 5}, TimeGrid(1.0, n), 3, 2);
    for (std::size_t r : {2u, 4u, 64u, 8192u}) {
      const auto coarse = coarsen(fine, r);
      for (std::size_t j = 0; j < 3; ++j) {
        double fine_sum = 0.0;
        double coarse_sum = 0.0;
        for (std::size_t k = 0; k < coarse.steps(); ++k) {
          for (std::size_t i = 0; i < r; ++i) fine_sum += fine.dW(k * r + i)[j];
          coarse_sum += coarse.dW(k)[j];
          CHECK(coarse_sum == fine_sum);
        }
      }
      // nested coarsening equals direct coarsening
      if (r >= 4) CHECK(coarsen(coarsen(fine, 2), r / 2) == coarse);
    }
  }
}

TEST_CASE("binary path dump") {
  const auto path = sample_path({31, 2}, TimeGrid(1.0, 16), 2, 1);
  const auto file = std::filesystem::temp_directory_path() / "ballsde_noise_roundtrip.bin";
  write_path_binary(path, file);
  CHECK(std::filesystem::file_size(file) == 4 * 8 + 16 * 3 * 8);
  const auto back = read_path_binary(file);
  CHECK(back.steps() == 16);
  CHECK(back.d() == 2);
  CHECK(back.m() == 1);
  CHECK(back.grid().dt() == path.grid().dt());
  CHECK(std::equal(back.all_dW().begin(), back.all_dW().end(), path.all_dW().begin()));
  CHECK(std::equal(back.all_dWhat().begin(), back.all_dWhat().end(), path.all_dWhat().begin()));
  std::filesystem::remove(file);
  CHECK_THROWS_AS(read_path_binary(file), Error);
}
