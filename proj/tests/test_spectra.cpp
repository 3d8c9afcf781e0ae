#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "psdclust/genmodel.hpp"
#include "psdclust/rng.hpp"
#include "psdclust/spectra.hpp"
#include "psdclust/window.hpp"

using namespace psdclust;

namespace {

Observation make_obs(std::vector<double> samples) {
  Observation obs;
  obs.mask.assign(samples.size(), 1);
  obs.samples = std::move(samples);
  return obs;
}

// O(M^2) reference for the biased sample autocorrelation.
std::vector<double> brute_force_acf(const std::vector<double>& x) {
  const std::size_t len = x.size();
  std::vector<double> acf(len, 0.0);
  for (std::size_t m = 0; m < len; ++m) {
    double sum = 0.0;
    for (std::size_t n = 0; n + m < len; ++n) sum += x[n + m] * x[n];
    acf[m] = sum / static_cast<double>(len);
  }
  return acf;
}

Observation random_obs(std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  Observation obs;
  obs.samples.resize(len);
  obs.mask.assign(len, 1);
  for (auto& v : obs.samples) v = rng.gauss();
  return obs;
}

}  // namespace

TEST_CASE("bartlett window closed form") {
  const WindowFunction w5 = bartlett_window(5);
  CHECK(w5.half_support() == 2);
  CHECK(w5.weights[0] == doctest::Approx(1.0));
  CHECK(w5.weights[1] == doctest::Approx(0.5));
  CHECK(w5.weights[2] == doctest::Approx(0.0));
  CHECK(w5.dtft_bound == doctest::Approx(2.0));

  const WindowFunction w101 = bartlett_window(101);
  CHECK(w101.dtft_bound == doctest::Approx(50.0));
  double sum = w101.weights[0];
  for (int m = 1; m <= w101.half_support(); ++m) sum += 2.0 * w101.weights[m];
  CHECK(sum == doctest::Approx(50.0));
}

TEST_CASE("bartlett DTFT peaks at zero frequency") {
  // dense-grid evaluation of |sum_m g[m] e^{-i2 pi f m}|
  const WindowFunction window = bartlett_window(101);
  const double sup = window_dtft_max(window, std::size_t{1} << 16);
  CHECK(std::abs(sup - 50.0) < 1e-9);
}

TEST_CASE("bartlett rejects bad lengths") {
  CHECK_THROWS_AS(bartlett_window(1), std::invalid_argument);
  CHECK_THROWS_AS(bartlett_window(2), std::invalid_argument);
  CHECK_THROWS_AS(bartlett_window(4), std::invalid_argument);
  CHECK_THROWS_AS(bartlett_window(-7), std::invalid_argument);
}

TEST_CASE("bias corrected window") {
  const WindowFunction base = bartlett_window(5);

  SUBCASE("p = 1 is the identity") {
    const WindowFunction same = bias_corrected_window(base, 1.0);
    CHECK(same.weights == base.weights);
    CHECK(same.dtft_bound == base.dtft_bound);
  }

  SUBCASE("lag 0 scales by 1/p, other lags by 1/p^2") {
    const WindowFunction corrected = bias_corrected_window(base, 0.5);
    CHECK(corrected.weights[0] == doctest::Approx(2.0));
    CHECK(corrected.weights[1] == doctest::Approx(2.0));  // 0.5 / 0.25
    CHECK(corrected.dtft_bound == doctest::Approx(base.dtft_bound / 0.25));
    CHECK(corrected.half_support() == base.half_support());
  }

  SUBCASE("rejects bad sampling probabilities") {
    CHECK_THROWS_AS(bias_corrected_window(base, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bias_corrected_window(base, -0.2), std::invalid_argument);
    CHECK_THROWS_AS(bias_corrected_window(base, 1.2), std::invalid_argument);
  }
}

TEST_CASE("acf estimate on tiny inputs") {
  const AcfEstimate spike = estimate_acf(make_obs({2, 0, 0, 0}));
  CHECK(spike.values[0] == doctest::Approx(1.0));
  CHECK(spike.values[1] == doctest::Approx(0.0));
  CHECK(spike.values[2] == doctest::Approx(0.0));
  CHECK(spike.values[3] == doctest::Approx(0.0));

  const AcfEstimate ones = estimate_acf(make_obs({1, 1, 1, 1}));
  CHECK(ones.values[0] == doctest::Approx(1.0));
  CHECK(ones.values[1] == doctest::Approx(0.75));
  CHECK(ones.values[2] == doctest::Approx(0.5));
  CHECK(ones.values[3] == doctest::Approx(0.25));
}

TEST_CASE("acf estimate matches the double-loop oracle") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const Observation obs = random_obs(64, seed);
    const AcfEstimate acf = estimate_acf(obs);
    const std::vector<double> expected = brute_force_acf(obs.samples);
    for (std::size_t m = 0; m < expected.size(); ++m) {
      CHECK(std::abs(acf.values[m] - expected[m]) < 1e-12);
    }
  }
  // assorted lengths, including masked data
  for (std::size_t len : {std::size_t{2}, std::size_t{3}, std::size_t{17}, std::size_t{100},
                          std::size_t{256}}) {
    Observation obs = random_obs(len, 1000 + len);
    Rng rng(len);
    for (std::size_t n = 0; n < len; ++n) {
      if (rng.uniform01() < 0.3) {
        obs.samples[n] = 0.0;
        obs.mask[n] = 0;
      }
    }
    const AcfEstimate acf = estimate_acf(obs);
    const std::vector<double> expected = brute_force_acf(obs.samples);
    for (std::size_t m = 0; m < expected.size(); ++m) {
      CHECK(std::abs(acf.values[m] - expected[m]) < 1e-12);
    }
  }
}

TEST_CASE("observation validation") {
  Observation obs = make_obs({1.0, 2.0, 3.0});
  obs.mask[1] = 0;  // stored sample is nonzero
  CHECK_THROWS_AS(validate_observation(obs), std::invalid_argument);
  CHECK_THROWS_AS(validate_observation(make_obs({1.0})), std::invalid_argument);
}

TEST_CASE("grid size choice") {
  CHECK(choose_grid_size(10) == 4096);
  CHECK(choose_grid_size(2000) == 4096);
  CHECK(choose_grid_size(2049) == 8192);
  CHECK(choose_grid_size(8000) == 16384);
}

TEST_CASE("bt psd basics") {
  const Observation obs = random_obs(200, 42);
  const AcfEstimate acf = estimate_acf(obs);
  const WindowFunction window = bartlett_window(31);
  const std::size_t grid = choose_grid_size(obs.length());
  const PsdEstimate psd = bt_psd(acf, window, grid);

  SUBCASE("grid mean equals the lag-0 product") {
    const double expected = window.weights[0] * acf.values[0];
    CHECK(grid_mean(psd) == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("even symmetry about f = 1/2") {
    double scale = 0.0;
    for (double v : psd.values) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 1; k < grid; ++k) {
      CHECK(std::abs(psd.values[k] - psd.values[grid - k]) <= 1e-9 * scale);
    }
  }

  SUBCASE("rejects bad grids and oversized windows") {
    CHECK_THROWS_AS(bt_psd(acf, window, 256), std::invalid_argument);   // < 2M-1
    CHECK_THROWS_AS(bt_psd(acf, window, 5000), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(bt_psd(acf, bartlett_window(401), grid), std::invalid_argument);
  }
}

TEST_CASE("lag-0-only window degenerates to a constant") {
  const AcfEstimate acf = estimate_acf(make_obs({2, 0, 0, 0}));
  const PsdEstimate psd = bt_psd(acf, make_window({1.0}), 8);
  for (double v : psd.values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("white noise gives a nearly flat estimate") {
  // L1 distance to the flat unit PSD below 0.1 in at least 18 of 20 runs
  const WindowFunction window = bartlett_window(101);
  const std::size_t len = 10000;
  const std::size_t grid = choose_grid_size(len);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Observation obs = random_obs(len, 900 + seed);
    const PsdEstimate psd = bt_psd(estimate_acf(obs), window, grid);
    double dist = 0.0;
    for (double v : psd.values) dist += std::abs(v - 1.0);
    dist *= 0.5 / static_cast<double>(grid);
    if (dist < 0.1) ++good;
  }
  CHECK(good >= 18);
}

TEST_CASE("normalize power") {
  PsdEstimate constant;
  constant.values.assign(64, 4.0);
  const PsdEstimate unit = normalize_power(constant);
  for (double v : unit.values) CHECK(v == doctest::Approx(1.0));

  SUBCASE("idempotent on unit-power input") {
    const PsdEstimate again = normalize_power(unit);
    for (std::size_t k = 0; k < unit.values.size(); ++k) {
      CHECK(std::abs(again.values[k] - unit.values[k]) < 1e-12);
    }
  }

  SUBCASE("random positive input ends at unit mean") {
    Rng rng(5);
    PsdEstimate psd;
    psd.values.resize(128);
    for (auto& v : psd.values) v = 0.1 + rng.uniform01();
    CHECK(grid_mean(normalize_power(psd)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("rejects non-positive power") {
    PsdEstimate zero;
    zero.values.assign(16, 0.0);
    CHECK_THROWS_AS(normalize_power(zero), std::invalid_argument);
    PsdEstimate negative;
    negative.values.assign(16, -1.0);
    CHECK_THROWS_AS(normalize_power(negative), std::invalid_argument);
  }
}

TEST_CASE("mask shrinks the expected lag-0 estimate by p") {
  // average of r[0] over many masked realizations vs p * (1 + sigma^2)
  const GenerativeModel model = ar2_model(0.6, 0.7 * std::numbers::pi, 1 << 14, 512);
  const double sigma = 0.3;
  const double prob = 0.6;
  const std::size_t len = 512;
  double mean_lag0 = 0.0;
  const int realizations = 2000;
  for (int r = 0; r < realizations; ++r) {
    Observation obs = sample_ar2(model, len, mix_seed(77, r));
    obs = corrupt(obs, {sigma, prob, mix_seed(78, r)});
    mean_lag0 += estimate_acf(obs).values[0];
  }
  mean_lag0 /= realizations;
  const double expected = prob * (1.0 + sigma * sigma);
  CHECK(std::abs(mean_lag0 - expected) < 0.05 * expected);
}

TEST_CASE("corrected window keeps the grid-mean identity under masking") {
  const WindowFunction window = bias_corrected_window(bartlett_window(21), 0.7);
  Observation obs = random_obs(300, 3);
  obs = corrupt(obs, {0.0, 0.7, 91});
  const AcfEstimate acf = estimate_acf(obs);
  const PsdEstimate psd = bt_psd(acf, window, 4096);
  CHECK(grid_mean(psd) == doctest::Approx(window.weights[0] * acf.values[0]).epsilon(1e-9));
}
