#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psdclust/spectra.hpp"

namespace psdclust {

enum class Metric { L1, L2, Linf };

Metric metric_from_string(const std::string& name);
std::string to_string(Metric metric);

struct DistanceMatrix {
  Eigen::MatrixXd entries;

  int size() const { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i, j); }
};

// L1: (1/2) * grid mean of |a - b|; L2: sqrt(grid mean of (a - b)^2);
// Linf: max |a - b|. Riemann sum on the common uniform grid.
double psd_distance(const PsdEstimate& a, const PsdEstimate& b, Metric metric);

DistanceMatrix pairwise_distances(const std::vector<PsdEstimate>& psds, Metric metric);

}  // namespace psdclust
