#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "psdclust/spectra.hpp"

namespace psdclust {

struct Ar2Params {
  double pole_radius = 0.0;    // a in (0, 1)
  double pole_angle = 0.0;     // radians in [0, pi]
  double innovation_var = 0.0; // gain that makes the PSD unit power
};

// A generative process model: analytic unit-power PSD tabulated on a fine
// grid, its autocorrelation up to max_lag, and the PSD supremum.
struct GenerativeModel {
  PsdEstimate psd;
  std::vector<double> acf;  // lags 0..max_lag
  double psd_sup = 0.0;
  std::optional<Ar2Params> ar2;

  int max_lag() const { return static_cast<int>(acf.size()) - 1; }
};

struct CorruptionSpec {
  double sigma = 0.0;          // noise standard deviation
  double sampling_prob = 1.0;  // Bernoulli observation rate
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kModelGridSize = std::size_t{1} << 18;
inline constexpr int kModelMaxLag = 4096;

// Two-pole resonator PSD b^2 / |1 - 2a cos(nu) e^{i2 pi f} + a^2 e^{i4 pi f}|^2
// with b^2 chosen so the grid mean is 1. The ACF comes from the inverse
// transform of the tabulated PSD. grid_size must be a power of two.
GenerativeModel ar2_model(double pole_radius, double pole_angle,
                          std::size_t grid_size = kModelGridSize, int max_lag = kModelMaxLag);

// Model from tabulated nonnegative PSD values (rescaled to unit power).
// The length must be a power of two.
GenerativeModel model_from_psd(std::vector<double> psd_values, int max_lag = kModelMaxLag);

// Runs the AR(2) recursion x[n] = 2a cos(nu) x[n-1] - a^2 x[n-2] + b w[n]
// with standard normal innovations, discards `burnin` samples and returns the
// next obs_len. Requires AR(2) parameters on the model.
Observation sample_ar2(const GenerativeModel& model, std::size_t obs_len, std::uint64_t seed,
                       std::size_t burnin = 2000);

// Adds white Gaussian noise, then applies an i.i.d. Bernoulli observation
// mask; masked entries are stored as zeros and the mask is kept.
Observation corrupt(const Observation& obs, const CorruptionSpec& spec);

// n_per_model corrupted observations per model, labeled 1..L in model order.
// Per-observation seeds are derived by stable hashing from spec.seed, so the
// dataset does not depend on generation order.
std::vector<Observation> make_dataset(const std::vector<GenerativeModel>& models, int n_per_model,
                                      std::size_t obs_len, const CorruptionSpec& spec);

// Covariance of dim consecutive samples of the noisy process:
// entries acf[|v-w|] + sigma^2 on the diagonal. Lags beyond max_lag are
// treated as zero (with a warning).
Eigen::MatrixXd toeplitz_cov(const GenerativeModel& model, double sigma, int dim);

// Exact finite-length Gaussian sampler: chol(R) * y with y standard normal.
// Limited to obs_len <= 2048. A 1e-10 jitter is added if the covariance is
// numerically not positive definite.
Observation sample_gp_exact(const GenerativeModel& model, double sigma, std::size_t obs_len,
                            std::uint64_t seed);

}  // namespace psdclust
