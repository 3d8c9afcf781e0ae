#include "psdclust/genmodel.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "psdclust/fft.hpp"
#include "psdclust/rng.hpp"

namespace psdclust {

namespace {

// ACF from a tabulated PSD: r[m] = grid mean of s(f) e^{i2 pi f m}, i.e. the
// inverse transform of the PSD samples.
std::vector<double> acf_from_psd(const std::vector<double>& psd, int max_lag) {
  const std::size_t grid = psd.size();
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= grid / 2) {
    throw std::invalid_argument("acf_from_psd: max_lag must be below half the grid size");
  }
  std::vector<std::complex<double>> buf(grid);
  for (std::size_t k = 0; k < grid; ++k) buf[k] = psd[k];
  fft_inplace(buf, true);
  std::vector<double> acf(max_lag + 1);
  for (int m = 0; m <= max_lag; ++m) acf[m] = buf[m].real();
  return acf;
}

}  // namespace

GenerativeModel ar2_model(double pole_radius, double pole_angle, std::size_t grid_size,
                          int max_lag) {
  if (!(pole_radius > 0.0) || !(pole_radius < 1.0)) {
    throw std::invalid_argument("ar2_model: pole_radius must be in (0, 1)");
  }
  if (pole_angle < 0.0 || pole_angle > std::numbers::pi) {
    throw std::invalid_argument("ar2_model: pole_angle must be in [0, pi]");
  }
  if (!is_power_of_two(grid_size) || grid_size < 8) {
    throw std::invalid_argument("ar2_model: grid_size must be a power of two >= 8");
  }

  const double phi = 2.0 * pole_radius * std::cos(pole_angle);
  const double radius_sq = pole_radius * pole_radius;
  std::vector<double> inv_den(grid_size);
  double inv_mean = 0.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(grid_size);
    // |1 - phi e^{i theta} + a^2 e^{i 2 theta}|^2
    const double re = 1.0 - phi * std::cos(theta) + radius_sq * std::cos(2.0 * theta);
    const double im = -phi * std::sin(theta) + radius_sq * std::sin(2.0 * theta);
    inv_den[k] = 1.0 / (re * re + im * im);
    inv_mean += inv_den[k];
  }
  inv_mean /= static_cast<double>(grid_size);
  const double gain = 1.0 / inv_mean;

  GenerativeModel model;
  model.psd.values.resize(grid_size);
  double sup = 0.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    model.psd.values[k] = gain * inv_den[k];
    sup = std::max(sup, model.psd.values[k]);
  }
  model.psd_sup = sup;
  model.acf = acf_from_psd(model.psd.values, max_lag);
  model.ar2 = Ar2Params{pole_radius, pole_angle, gain};
  return model;
}

GenerativeModel model_from_psd(std::vector<double> psd_values, int max_lag) {
  if (psd_values.size() < 8 || !is_power_of_two(psd_values.size())) {
    throw std::invalid_argument("model_from_psd: need a power-of-two grid of size >= 8");
  }
  double mean = 0.0;
  for (double v : psd_values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("model_from_psd: PSD values must be finite and nonnegative");
    }
    mean += v;
  }
  mean /= static_cast<double>(psd_values.size());
  if (!(mean > 0.0)) throw std::invalid_argument("model_from_psd: PSD must have positive power");

  GenerativeModel model;
  model.psd.values = std::move(psd_values);
  double sup = 0.0;
  for (double& v : model.psd.values) {
    v /= mean;
    sup = std::max(sup, v);
  }
  model.psd_sup = sup;
  model.acf = acf_from_psd(model.psd.values, max_lag);
  return model;
}

Observation sample_ar2(const GenerativeModel& model, std::size_t obs_len, std::uint64_t seed,
                       std::size_t burnin) {
  if (!model.ar2.has_value()) {
    throw std::invalid_argument("sample_ar2: model has no AR(2) parameters");
  }
  if (obs_len < 2) throw std::invalid_argument("sample_ar2: obs_len must be >= 2");

  const double phi1 = 2.0 * model.ar2->pole_radius * std::cos(model.ar2->pole_angle);
  const double phi2 = -model.ar2->pole_radius * model.ar2->pole_radius;
  const double scale = std::sqrt(model.ar2->innovation_var);

  Rng rng(seed);
  Observation obs;
  obs.samples.resize(obs_len);
  obs.mask.assign(obs_len, 1);
  double prev = 0.0, prev2 = 0.0;
  for (std::size_t n = 0; n < burnin + obs_len; ++n) {
    const double value = phi1 * prev + phi2 * prev2 + scale * rng.gauss();
    prev2 = prev;
    prev = value;
    if (n >= burnin) obs.samples[n - burnin] = value;
  }
  return obs;
}

Observation corrupt(const Observation& obs, const CorruptionSpec& spec) {
  validate_observation(obs);
  if (spec.sigma < 0.0) throw std::invalid_argument("corrupt: sigma must be >= 0");
  if (!(spec.sampling_prob > 0.0) || spec.sampling_prob > 1.0) {
    throw std::invalid_argument("corrupt: sampling_prob must be in (0, 1]");
  }
  Rng rng(spec.seed);
  Observation out = obs;
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    const double noisy = obs.samples[n] + spec.sigma * rng.gauss();
    const bool keep = rng.uniform01() < spec.sampling_prob;
    out.samples[n] = keep ? noisy : 0.0;
    out.mask[n] = keep ? 1 : 0;
  }
  return out;
}

std::vector<Observation> make_dataset(const std::vector<GenerativeModel>& models, int n_per_model,
                                      std::size_t obs_len, const CorruptionSpec& spec) {
  if (models.empty()) throw std::invalid_argument("make_dataset: need at least one model");
  if (n_per_model < 1) throw std::invalid_argument("make_dataset: n_per_model must be >= 1");

  std::vector<Observation> dataset;
  dataset.reserve(models.size() * static_cast<std::size_t>(n_per_model));
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (int i = 0; i < n_per_model; ++i) {
      const std::uint64_t sample_seed = mix_seed(spec.seed, m, static_cast<std::uint64_t>(i), 0);
      Observation obs = models[m].ar2.has_value()
                            ? sample_ar2(models[m], obs_len, sample_seed)
                            : sample_gp_exact(models[m], 0.0, obs_len, sample_seed);
      CorruptionSpec local = spec;
      local.seed = mix_seed(spec.seed, m, static_cast<std::uint64_t>(i), 1);
      obs = corrupt(obs, local);
      obs.label = static_cast<int>(m) + 1;
      dataset.push_back(std::move(obs));
    }
  }
  return dataset;
}

Eigen::MatrixXd toeplitz_cov(const GenerativeModel& model, double sigma, int dim) {
  if (dim < 1) throw std::invalid_argument("toeplitz_cov: dim must be >= 1");
  if (sigma < 0.0) throw std::invalid_argument("toeplitz_cov: sigma must be >= 0");
  if (model.max_lag() < dim - 1) {
    std::cerr << "toeplitz_cov: ACF known up to lag " << model.max_lag()
              << " < " << dim - 1 << "; padding with zeros\n";
  }
  Eigen::MatrixXd cov(dim, dim);
  for (int v = 0; v < dim; ++v) {
    for (int w = 0; w < dim; ++w) {
      const int lag = v > w ? v - w : w - v;
      double value = lag <= model.max_lag() ? model.acf[lag] : 0.0;
      if (v == w) value += sigma * sigma;
      cov(v, w) = value;
    }
  }
  return cov;
}

Observation sample_gp_exact(const GenerativeModel& model, double sigma, std::size_t obs_len,
                            std::uint64_t seed) {
  if (obs_len < 2 || obs_len > 2048) {
    throw std::invalid_argument("sample_gp_exact: obs_len must be in [2, 2048]");
  }
  const int dim = static_cast<int>(obs_len);
  Eigen::MatrixXd cov = toeplitz_cov(model, sigma, dim);
  Eigen::LLT<Eigen::MatrixXd> chol(cov);
  if (chol.info() != Eigen::Success) {
    cov.diagonal().array() += 1e-10;
    chol.compute(cov);
    if (chol.info() != Eigen::Success) {
      throw std::runtime_error("sample_gp_exact: covariance is not positive definite");
    }
  }

  Rng rng(seed);
  Eigen::VectorXd draw(dim);
  for (int i = 0; i < dim; ++i) draw(i) = rng.gauss();
  Eigen::VectorXd sample = chol.matrixL() * draw;

  Observation obs;
  obs.samples.assign(sample.data(), sample.data() + dim);
  obs.mask.assign(obs_len, 1);
  return obs;
}

}  // namespace psdclust
