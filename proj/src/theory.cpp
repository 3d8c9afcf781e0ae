#include "psdclust/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "psdclust/rng.hpp"

namespace psdclust {

namespace {

void require_symmetric(const Eigen::MatrixXd& mat, const char* who) {
  if (mat.rows() != mat.cols() || mat.rows() < 1) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument(std::string(who) + ": matrix must be symmetric");
  }
}

// Certified bound on sum_{m > max_lag} |r[m]| from a geometric fit of the
// last ACF block; rejects tails that do not decay. Values at the numerical
// noise floor of the tabulated transform count as zero.
double acf_tail_bound(const std::vector<double>& acf) {
  constexpr double kNoiseFloor = 1e-12;
  const int max_lag = static_cast<int>(acf.size()) - 1;
  const int block = std::min(64, (max_lag + 1) / 4);
  if (block < 1) throw std::invalid_argument("acf_moment: ACF too short for a tail estimate");
  auto magnitude = [&](int m) {
    const double v = std::abs(acf[m]);
    return v < kNoiseFloor ? 0.0 : v;
  };
  double last = 0.0, before = 0.0;
  for (int m = max_lag - block + 1; m <= max_lag; ++m) last += magnitude(m);
  for (int m = max_lag - 2 * block + 1; m <= max_lag - block; ++m) before += magnitude(m);
  if (last == 0.0) return 0.0;
  if (before <= last) {
    throw std::invalid_argument("acf_moment: ACF tail does not decay; increase max_lag");
  }
  const double ratio = last / before;  // decay over one block
  return last * ratio / (1.0 - ratio);
}

}  // namespace

double model_distance(const GenerativeModel& a, const GenerativeModel& b) {
  const std::size_t grid = a.psd.values.size();
  if (grid == 0 || grid != b.psd.values.size()) {
    throw std::invalid_argument("model_distance: models must share a grid");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < grid; ++k) sum += std::abs(a.psd.values[k] - b.psd.values[k]);
  return 0.5 * sum / static_cast<double>(grid);
}

double acf_moment(const GenerativeModel& model, const WindowFunction& window, double obs_len) {
  if (!(obs_len >= 2.0)) throw std::invalid_argument("acf_moment: obs_len must be >= 2");
  const double tail = acf_tail_bound(model.acf);
  if (!(tail < 1e-6)) {
    throw std::invalid_argument("acf_moment: truncated ACF tail exceeds 1e-6; increase max_lag");
  }

  auto lag_factor = [&](int m) {
    if (static_cast<double>(m) < obs_len) {
      return std::abs(1.0 - window.weight(m) * (1.0 - static_cast<double>(m) / obs_len));
    }
    return 1.0;
  };

  double moment = lag_factor(0) * std::abs(model.acf[0]);
  for (int m = 1; m <= model.max_lag(); ++m) {
    moment += 2.0 * lag_factor(m) * std::abs(model.acf[m]);
  }
  return moment;
}

ConditionReport clustering_condition(const std::vector<GenerativeModel>& models,
                                     const WindowFunction& window, double obs_len, double sigma,
                                     double sampling_prob) {
  if (models.size() < 2) throw std::invalid_argument("clustering_condition: need >= 2 models");
  if (sigma < 0.0) throw std::invalid_argument("clustering_condition: sigma must be >= 0");
  if (!(sampling_prob > 0.0) || sampling_prob > 1.0) {
    throw std::invalid_argument("clustering_condition: sampling_prob must be in (0, 1]");
  }
  if (!(obs_len >= 2.0)) throw std::invalid_argument("clustering_condition: obs_len must be >= 2");

  ConditionReport report;
  report.min_model_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      report.min_model_distance =
          std::min(report.min_model_distance, model_distance(models[i], models[j]));
    }
  }

  double psd_sup = 0.0;
  report.mu_max = 0.0;
  for (const auto& model : models) {
    psd_sup = std::max(psd_sup, model.psd_sup);
    report.mu_max = std::max(report.mu_max, acf_moment(model, window, obs_len));
  }

  const double noise_var = sigma * sigma;
  const double bound = window.dtft_bound;
  const double p2 = sampling_prob * sampling_prob;
  const double estimation_term =
      8.0 * std::numbers::sqrt2 * bound *
      (psd_sup + noise_var + std::numbers::sqrt2 * (1.0 + sampling_prob) * (1.0 + noise_var)) /
      p2 * std::sqrt(std::log(obs_len) / obs_len);
  report.rhs = estimation_term + 2.0 * report.mu_max;
  report.satisfied = report.min_model_distance > report.rhs;
  report.margin = report.min_model_distance - report.rhs;
  return report;
}

bool check_strict_separation(const DistanceMatrix& distances, const std::vector<int>& labels) {
  const int count = distances.size();
  if (static_cast<int>(labels.size()) != count) {
    throw std::invalid_argument("check_strict_separation: label count mismatch");
  }
  double max_same = -std::numeric_limits<double>::infinity();
  double min_cross = std::numeric_limits<double>::infinity();
  bool any_same = false, any_cross = false;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      if (labels[i] == labels[j]) {
        any_same = true;
        max_same = std::max(max_same, distances(i, j));
      } else {
        any_cross = true;
        min_cross = std::min(min_cross, distances(i, j));
      }
    }
  }
  if (!any_same) {
    throw std::invalid_argument("check_strict_separation: no label class has two members");
  }
  if (!any_cross) {
    throw std::invalid_argument("check_strict_separation: need at least two label classes");
  }
  return min_cross > max_same;
}

double prop1_bound(const Eigen::MatrixXd& cov_cross, const Eigen::MatrixXd& cov_within) {
  require_symmetric(cov_cross, "prop1_bound");
  require_symmetric(cov_within, "prop1_bound");
  if (cov_cross.rows() != cov_within.rows()) {
    throw std::invalid_argument("prop1_bound: dimension mismatch");
  }
  // tr(AB) = sum_ij A_ij B_ij for symmetric A, B.
  const double trace_cross = cov_cross.cwiseProduct(cov_within).sum();
  const double trace_within = cov_within.cwiseProduct(cov_within).sum();
  if (!(trace_within > 0.0)) {
    throw std::invalid_argument("prop1_bound: tr(Rw Rw) must be positive");
  }
  const double ratio =
      std::sqrt(std::max(trace_cross, 0.0)) / (5.0 * std::sqrt(3.0) * std::sqrt(trace_within));
  return std::atan(ratio) / (5.0 * std::numbers::pi);
}

double spectral_norm(const Eigen::MatrixXd& mat) {
  require_symmetric(mat, "spectral_norm");
  const Eigen::Index dim = mat.rows();
  Rng rng(0x5eedULL);
  Eigen::VectorXd vec(dim);
  for (Eigen::Index i = 0; i < dim; ++i) vec(i) = rng.gauss();
  vec.normalize();

  double estimate = 0.0;
  for (int iteration = 0; iteration < 512; ++iteration) {
    const Eigen::VectorXd image = mat * vec;
    estimate = image.norm();
    if (estimate == 0.0) return 0.0;
    // The dominant eigenvalue may be negative, so accept either sign.
    const double residual = std::min((image - estimate * vec).norm(),
                                     (image + estimate * vec).norm());
    vec = image / estimate;
    if (residual <= 1e-10 * std::max(1.0, estimate)) break;
  }
  return estimate;
}

double quadform_tail_bound(const Eigen::MatrixXd& mat, double sampling_prob, double threshold) {
  require_symmetric(mat, "quadform_tail_bound");
  if (!(threshold > 0.0)) throw std::invalid_argument("quadform_tail_bound: threshold must be > 0");
  if (!(sampling_prob > 0.0) || sampling_prob > 1.0) {
    throw std::invalid_argument("quadform_tail_bound: sampling_prob must be in (0, 1]");
  }
  const double norm = spectral_norm(mat);
  if (norm == 0.0) throw std::invalid_argument("quadform_tail_bound: zero matrix");
  const double dim = static_cast<double>(mat.rows());
  const double one_plus_p = 1.0 + sampling_prob;
  return 4.0 * std::exp(-threshold * threshold /
                        (32.0 * one_plus_p * one_plus_p * dim * norm * norm));
}

double quadform_mc_tail(const Eigen::MatrixXd& mat, double sampling_prob, double threshold,
                        int trials, std::uint64_t seed) {
  require_symmetric(mat, "quadform_mc_tail");
  if (!(threshold > 0.0)) throw std::invalid_argument("quadform_mc_tail: threshold must be > 0");
  if (!(sampling_prob > 0.0) || sampling_prob > 1.0) {
    throw std::invalid_argument("quadform_mc_tail: sampling_prob must be in (0, 1]");
  }
  if (trials < 1) throw std::invalid_argument("quadform_mc_tail: trials must be >= 1");

  const int dim = static_cast<int>(mat.rows());
  const double diag_sum = mat.diagonal().sum();
  const double full_sum = mat.sum();
  const double expectation =
      sampling_prob * diag_sum + sampling_prob * sampling_prob * (full_sum - diag_sum);

  std::vector<int> kept;
  kept.reserve(dim);
  long long exceed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    kept.clear();
    for (int i = 0; i < dim; ++i) {
      if (rng.uniform01() < sampling_prob) kept.push_back(i);
    }
    double quad = 0.0;
    for (int a : kept) {
      // column a equals row a here (symmetric), and columns are contiguous
      const double* col = mat.data() + static_cast<std::ptrdiff_t>(a) * dim;
      double partial = 0.0;
      for (int b : kept) partial += col[b];
      quad += partial;
    }
    if (std::abs(quad - expectation) > threshold) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(trials);
}

}  // namespace psdclust
