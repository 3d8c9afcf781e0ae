#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "psdclust/distance.hpp"
#include "psdclust/genmodel.hpp"
#include "psdclust/window.hpp"

namespace psdclust {

// Numerical evaluation of the clustering condition
//   min_{k != l} d(model_k, model_l) >
//     8 sqrt(2) A (B + sigma^2 + sqrt(2)(1+p)(1+sigma^2)) / p^2
//       * sqrt(log M / M) + 2 mu_max.
struct ConditionReport {
  double min_model_distance = 0.0;
  double rhs = 0.0;
  double mu_max = 0.0;
  bool satisfied = false;
  double margin = 0.0;  // min_model_distance - rhs
};

// (1/2) * grid mean of |s1 - s2| on the common grid.
double model_distance(const GenerativeModel& a, const GenerativeModel& b);

// ACF moment sum_m |h[m]| |r[m]| with h[m] = 1 - g[m](1 - |m|/M) inside
// |m| < M and h[m] = 1 beyond, truncated at the model's max lag. Errors if a
// geometric fit of the ACF tail cannot certify the truncation error < 1e-6.
double acf_moment(const GenerativeModel& model, const WindowFunction& window, double obs_len);

// Evaluates the clustering condition for the given (uncorrected) window,
// observation length, noise level and sampling probability.
ConditionReport clustering_condition(const std::vector<GenerativeModel>& models,
                                     const WindowFunction& window, double obs_len, double sigma,
                                     double sampling_prob);

// True iff every cross-label distance exceeds every same-label distance.
// Label classes with fewer than two members contribute no same-label pairs;
// an error is raised if no same-label pair exists at all.
bool check_strict_separation(const DistanceMatrix& distances, const std::vector<int>& labels);

// Lower bound (1/(5 pi)) arctan( sqrt(tr(Rc Rw)) / (5 sqrt(3) sqrt(tr(Rw Rw))) )
// on the probability that an inner product against a cross-model observation
// dominates one against a same-model observation.
double prop1_bound(const Eigen::MatrixXd& cov_cross, const Eigen::MatrixXd& cov_within);

// Spectral norm of a symmetric matrix by power iteration (tolerance 1e-10,
// a few hundred iterations).
double spectral_norm(const Eigen::MatrixXd& mat);

// Tail bound 4 exp(-t^2 / (32 (1+p)^2 M |H|^2)) for the quadratic form
// xi^T H xi in a Bernoulli(p) mask xi, |H| the spectral norm, M = dim(H).
// Values above 1 are returned as-is.
double quadform_tail_bound(const Eigen::MatrixXd& mat, double sampling_prob, double threshold);

// Empirical counterpart: fraction of mask draws with
// |xi^T H xi - E[xi^T H xi]| > t, the expectation computed exactly as
// p * sum_i H_ii + p^2 * sum_{i != j} H_ij.
double quadform_mc_tail(const Eigen::MatrixXd& mat, double sampling_prob, double threshold,
                        int trials, std::uint64_t seed);

}  // namespace psdclust
