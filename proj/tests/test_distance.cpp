#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "psdclust/distance.hpp"
#include "psdclust/genmodel.hpp"
#include "psdclust/rng.hpp"

using namespace psdclust;

namespace {

PsdEstimate from_values(std::vector<double> values) {
  PsdEstimate psd;
  psd.values = std::move(values);
  return psd;
}

PsdEstimate random_psd(std::size_t grid, std::uint64_t seed) {
  Rng rng(seed);
  PsdEstimate psd;
  psd.values.resize(grid);
  for (auto& v : psd.values) v = rng.uniform01() * 3.0;
  return psd;
}

const Metric kMetrics[] = {Metric::L1, Metric::L2, Metric::Linf};

}  // namespace

TEST_CASE("identical inputs are at distance zero") {
  const PsdEstimate psd = random_psd(64, 1);
  for (Metric metric : kMetrics) CHECK(psd_distance(psd, psd, metric) == doctest::Approx(0.0));
}

TEST_CASE("disjoint unit-power supports are at L1 distance one") {
  const PsdEstimate low = from_values({2, 2, 0, 0});
  const PsdEstimate high = from_values({0, 0, 2, 2});
  CHECK(psd_distance(low, high, Metric::L1) == doctest::Approx(1.0));
}

TEST_CASE("coarse-grid quadrature agrees with the fine reference") {
  // resonator pair evaluated at 4096 points vs a 2^18-point reference
  const double nu1 = 0.7 * std::numbers::pi;
  const double nu2 = 0.62 * std::numbers::pi;
  for (Metric metric : kMetrics) {
    const double coarse = psd_distance(ar2_model(0.6, nu1, 4096, 1024).psd,
                                       ar2_model(0.6, nu2, 4096, 1024).psd, metric);
    const double fine = psd_distance(ar2_model(0.6, nu1, 1 << 18).psd,
                                     ar2_model(0.6, nu2, 1 << 18).psd, metric);
    CHECK(std::abs(coarse - fine) < 1e-3);
  }
}

TEST_CASE("mismatched grids are rejected") {
  CHECK_THROWS_AS(psd_distance(random_psd(32, 1), random_psd(64, 2), Metric::L1),
                  std::invalid_argument);
}

TEST_CASE("pairwise distances") {
  SUBCASE("two identical PSDs give the zero matrix") {
    const PsdEstimate psd = random_psd(32, 9);
    const DistanceMatrix distances = pairwise_distances({psd, psd}, Metric::L1);
    CHECK(distances.size() == 2);
    CHECK(distances(0, 1) == doctest::Approx(0.0));
    CHECK(distances(1, 0) == doctest::Approx(0.0));
  }

  SUBCASE("matches scalar calls") {
    const std::vector<PsdEstimate> psds = {random_psd(32, 1), random_psd(32, 2),
                                           random_psd(32, 3)};
    const DistanceMatrix distances = pairwise_distances(psds, Metric::L2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double expected = i == j ? 0.0 : psd_distance(psds[i], psds[j], Metric::L2);
        CHECK(distances(i, j) == doctest::Approx(expected));
      }
    }
  }

  SUBCASE("symmetric with zero diagonal on random input") {
    std::vector<PsdEstimate> psds;
    for (std::uint64_t seed = 0; seed < 10; ++seed) psds.push_back(random_psd(64, 100 + seed));
    const DistanceMatrix distances = pairwise_distances(psds, Metric::L1);
    for (int i = 0; i < 10; ++i) {
      CHECK(distances(i, i) == 0.0);
      for (int j = 0; j < 10; ++j) {
        CHECK(distances(i, j) == distances(j, i));
        CHECK(distances(i, j) >= 0.0);
      }
    }
  }

  SUBCASE("fewer than two PSDs is an error") {
    CHECK_THROWS_AS(pairwise_distances({random_psd(8, 1)}, Metric::L1), std::invalid_argument);
  }
}

TEST_CASE("triangle inequality on random triples") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const PsdEstimate a = random_psd(48, 3 * seed);
    const PsdEstimate b = random_psd(48, 3 * seed + 1);
    const PsdEstimate c = random_psd(48, 3 * seed + 2);
    for (Metric metric : kMetrics) {
      const double ab = psd_distance(a, b, metric);
      const double bc = psd_distance(b, c, metric);
      const double ac = psd_distance(a, c, metric);
      CHECK(ac <= ab + bc + 1e-12);
    }
  }
}

TEST_CASE("distances scale with the inputs") {
  const PsdEstimate a = random_psd(48, 7);
  const PsdEstimate b = random_psd(48, 8);
  const double factor = 3.25;
  PsdEstimate a_scaled = a;
  PsdEstimate b_scaled = b;
  for (auto& v : a_scaled.values) v *= factor;
  for (auto& v : b_scaled.values) v *= factor;
  for (Metric metric : kMetrics) {
    CHECK(psd_distance(a_scaled, b_scaled, metric) ==
          doctest::Approx(factor * psd_distance(a, b, metric)));
  }
}

TEST_CASE("unit-power nonnegative PSDs stay within L1 distance one") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PsdEstimate a = random_psd(64, 500 + seed);
    PsdEstimate b = random_psd(64, 600 + seed);
    const double mean_a = grid_mean(a);
    const double mean_b = grid_mean(b);
    for (auto& v : a.values) v /= mean_a;
    for (auto& v : b.values) v /= mean_b;
    const double dist = psd_distance(a, b, Metric::L1);
    CHECK(dist >= 0.0);
    CHECK(dist <= 1.0 + 1e-12);
  }
}
