#include "psdclust/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace psdclust {

Metric metric_from_string(const std::string& name) {
  if (name == "L1") return Metric::L1;
  if (name == "L2") return Metric::L2;
  if (name == "Linf") return Metric::Linf;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::L1: return "L1";
    case Metric::L2: return "L2";
    case Metric::Linf: return "Linf";
  }
  return "?";
}

double psd_distance(const PsdEstimate& a, const PsdEstimate& b, Metric metric) {
  const std::size_t grid = a.values.size();
  if (grid == 0 || grid != b.values.size()) {
    throw std::invalid_argument("psd_distance: grid sizes must match");
  }
  switch (metric) {
    case Metric::L1: {
      double sum = 0.0;
      for (std::size_t k = 0; k < grid; ++k) sum += std::abs(a.values[k] - b.values[k]);
      return 0.5 * sum / static_cast<double>(grid);
    }
    case Metric::L2: {
      double sum = 0.0;
      for (std::size_t k = 0; k < grid; ++k) {
        const double diff = a.values[k] - b.values[k];
        sum += diff * diff;
      }
      return std::sqrt(sum / static_cast<double>(grid));
    }
    case Metric::Linf: {
      double best = 0.0;
      for (std::size_t k = 0; k < grid; ++k) {
        best = std::max(best, std::abs(a.values[k] - b.values[k]));
      }
      return best;
    }
  }
  throw std::logic_error("psd_distance: unreachable");
}

DistanceMatrix pairwise_distances(const std::vector<PsdEstimate>& psds, Metric metric) {
  const int count = static_cast<int>(psds.size());
  if (count < 2) throw std::invalid_argument("pairwise_distances: need at least 2 PSDs");
  DistanceMatrix result;
  result.entries = Eigen::MatrixXd::Zero(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const double d = psd_distance(psds[i], psds[j], metric);
      result.entries(i, j) = d;
      result.entries(j, i) = d;
    }
  }
  return result;
}

}  // namespace psdclust
