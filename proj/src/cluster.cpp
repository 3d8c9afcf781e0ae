#include "psdclust/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "psdclust/rng.hpp"

namespace psdclust {

namespace {

void validate_distances(const DistanceMatrix& distances) {
  const int count = distances.size();
  if (count < 2 || distances.entries.cols() != count) {
    throw std::invalid_argument("distance matrix must be square with size >= 2");
  }
}

void validate_adjacency(const Eigen::MatrixXd& adjacency) {
  const Eigen::Index count = adjacency.rows();
  if (count < 1 || adjacency.cols() != count) {
    throw std::invalid_argument("adjacency must be square");
  }
  const double scale = std::max(1.0, adjacency.cwiseAbs().maxCoeff());
  if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("adjacency must be symmetric");
  }
  if (adjacency.minCoeff() < -1e-12) {
    throw std::invalid_argument("adjacency must be nonnegative");
  }
}

// Embedding rows and the ascending Laplacian spectrum.
struct SpectralEmbedding {
  Eigen::MatrixXd rows;
  std::vector<double> eigenvalues;
};

SpectralEmbedding spectral_embedding(const Eigen::MatrixXd& adjacency, int dims) {
  const Eigen::Index count = adjacency.rows();
  Eigen::VectorXd degree = adjacency.rowwise().sum();
  if (degree.minCoeff() <= 0.0) {
    throw std::invalid_argument("spectral clustering: graph has an isolated node");
  }
  Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
  Eigen::MatrixXd laplacian =
      Eigen::MatrixXd::Identity(count, count) -
      inv_sqrt.asDiagonal() * adjacency * inv_sqrt.asDiagonal();
  // Force exact symmetry before the eigensolver.
  laplacian = 0.5 * (laplacian + laplacian.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral clustering: eigendecomposition failed");
  }

  SpectralEmbedding out;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + count);
  out.rows = solver.eigenvectors().leftCols(dims);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double norm = out.rows.row(i).norm();
    if (norm > 1e-12) out.rows.row(i) /= norm;
    // zero rows stay zero
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> knn_sets(const DistanceMatrix& distances, int num_neighbors) {
  validate_distances(distances);
  const int count = distances.size();
  if (num_neighbors < 1 || num_neighbors > count - 1) {
    throw std::invalid_argument("knn_sets: num_neighbors must be in [1, N-1]");
  }
  std::vector<std::vector<int>> sets(count);
  std::vector<int> order(count);
  for (int i = 0; i < count; ++i) {
    order.resize(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return distances(i, a) < distances(i, b);
    });
    sets[i].reserve(num_neighbors);
    for (int j : order) {
      if (j == i) continue;
      sets[i].push_back(j);
      if (static_cast<int>(sets[i].size()) == num_neighbors) break;
    }
  }
  return sets;
}

NeighborGraph nnpc_adjacency(const DistanceMatrix& distances, int num_neighbors) {
  NeighborGraph graph;
  graph.neighbor_sets = knn_sets(distances, num_neighbors);
  const int count = distances.size();
  Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(count, count);
  for (int j = 0; j < count; ++j) {
    for (int i : graph.neighbor_sets[j]) {
      directed(i, j) = std::exp(-2.0 * distances(i, j));
    }
  }
  graph.adjacency = directed + directed.transpose();
  return graph;
}

ClusteringResult spectral_cluster(const Eigen::MatrixXd& adjacency, int num_clusters,
                                  std::uint64_t seed) {
  validate_adjacency(adjacency);
  const int count = static_cast<int>(adjacency.rows());
  if (num_clusters < 1 || num_clusters > count) {
    throw std::invalid_argument("spectral_cluster: num_clusters must be in [1, N]");
  }
  SpectralEmbedding embedding = spectral_embedding(adjacency, num_clusters);

  ClusteringResult result;
  result.eigenvalues = std::move(embedding.eigenvalues);
  if (num_clusters == 1) {
    result.assignments.assign(count, 0);
    return result;
  }
  detail::KmeansResult km = detail::kmeans_rows(embedding.rows, num_clusters, 20, 100, seed);
  result.assignments = std::move(km.labels);
  return result;
}

int eigengap_estimate(const Eigen::MatrixXd& adjacency, int max_clusters) {
  validate_adjacency(adjacency);
  const int count = static_cast<int>(adjacency.rows());
  if (max_clusters < 2 || max_clusters > count) {
    throw std::invalid_argument("eigengap_estimate: max_clusters must be in [2, N]");
  }
  const std::vector<double> spectrum = detail::laplacian_spectrum(adjacency);
  int best = 1;
  double best_gap = -1.0;
  for (int k = 1; k < max_clusters; ++k) {
    const double gap = spectrum[k] - spectrum[k - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

ClusteringResult nnpc(const std::vector<PsdEstimate>& psds, int num_clusters, int num_neighbors,
                      Metric metric, std::uint64_t seed, const std::vector<int>* truth_labels) {
  const DistanceMatrix distances = pairwise_distances(psds, metric);
  const NeighborGraph graph = nnpc_adjacency(distances, num_neighbors);
  ClusteringResult result = spectral_cluster(graph.adjacency, num_clusters, seed);
  if (truth_labels != nullptr) {
    if (truth_labels->size() != psds.size()) {
      throw std::invalid_argument("nnpc: truth label count mismatch");
    }
    result.nfc_violations = count_cross_label_edges(graph.adjacency, *truth_labels);
  }
  return result;
}

ClusteringResult km_farthest(const DistanceMatrix& distances, int num_clusters) {
  validate_distances(distances);
  const int count = distances.size();
  if (num_clusters < 1 || num_clusters > count) {
    throw std::invalid_argument("km_farthest: num_clusters must be in [1, N]");
  }

  std::vector<int> centers;
  centers.reserve(num_clusters);
  centers.push_back(0);
  std::vector<double> min_dist(count);
  for (int i = 0; i < count; ++i) min_dist[i] = distances(i, 0);
  while (static_cast<int>(centers.size()) < num_clusters) {
    int best = 0;
    for (int i = 1; i < count; ++i) {
      if (min_dist[i] > min_dist[best]) best = i;
    }
    centers.push_back(best);
    for (int i = 0; i < count; ++i) {
      min_dist[i] = std::min(min_dist[i], distances(i, best));
    }
  }

  ClusteringResult result;
  result.center_indices = centers;
  result.assignments.resize(count);
  for (int i = 0; i < count; ++i) {
    int best = 0;
    for (int c = 1; c < num_clusters; ++c) {
      if (distances(i, centers[c]) < distances(i, centers[best])) best = c;
    }
    result.assignments[i] = best;
  }
  return result;
}

ClusteringResult kmit(const std::vector<PsdEstimate>& psds, int num_clusters, int iterations,
                      Metric metric) {
  if (iterations < 0) throw std::invalid_argument("kmit: iterations must be >= 0");
  const DistanceMatrix distances = pairwise_distances(psds, metric);
  ClusteringResult result = km_farthest(distances, num_clusters);

  const std::size_t grid = psds.front().grid_size();
  std::vector<PsdEstimate> centers(num_clusters);
  for (int c = 0; c < num_clusters; ++c) centers[c] = psds[result.center_indices[c]];

  for (int iter = 0; iter < iterations; ++iter) {
    // Centers become the pointwise means of their members.
    for (int c = 0; c < num_clusters; ++c) {
      std::vector<double> sum(grid, 0.0);
      int members = 0;
      for (std::size_t i = 0; i < psds.size(); ++i) {
        if (result.assignments[i] != c) continue;
        ++members;
        for (std::size_t k = 0; k < grid; ++k) sum[k] += psds[i].values[k];
      }
      if (members == 0) continue;  // empty cluster keeps its previous center
      for (std::size_t k = 0; k < grid; ++k) sum[k] /= members;
      centers[c].values = std::move(sum);
    }

    std::vector<int> next(psds.size());
    for (std::size_t i = 0; i < psds.size(); ++i) {
      int best = 0;
      double best_dist = psd_distance(psds[i], centers[0], metric);
      for (int c = 1; c < num_clusters; ++c) {
        const double d = psd_distance(psds[i], centers[c], metric);
        if (d < best_dist) {
          best_dist = d;
          best = c;
        }
      }
      next[i] = best;
    }
    if (next == result.assignments) break;
    result.assignments = std::move(next);
  }
  result.center_psds = std::move(centers);
  return result;
}

ClusteringResult hierarchical(const DistanceMatrix& distances, Linkage linkage, int num_clusters) {
  validate_distances(distances);
  const int count = distances.size();
  if (num_clusters < 1 || num_clusters > count) {
    throw std::invalid_argument("hierarchical: num_clusters must be in [1, N]");
  }

  // Active clusters carry their smallest original index as representative;
  // linkage distances update via Lance-Williams.
  std::vector<int> rep(count), size(count, 1);
  std::vector<bool> active(count, true);
  std::iota(rep.begin(), rep.end(), 0);
  Eigen::MatrixXd link = distances.entries;
  std::vector<int> member_of(count);
  std::iota(member_of.begin(), member_of.end(), 0);

  int remaining = count;
  while (remaining > num_clusters) {
    int best_i = -1, best_j = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < count; ++j) {
        if (!active[j]) continue;
        const double d = link(i, j);
        const int lo = std::min(rep[i], rep[j]);
        const int hi = std::max(rep[i], rep[j]);
        bool better = d < best_d;
        if (!better && d == best_d && best_i >= 0) {
          const int cur_lo = std::min(rep[best_i], rep[best_j]);
          const int cur_hi = std::max(rep[best_i], rep[best_j]);
          better = lo < cur_lo || (lo == cur_lo && hi < cur_hi);
        }
        if (better) {
          best_d = d;
          best_i = i;
          best_j = j;
        }
      }
    }

    const int keep = best_i, drop = best_j;
    for (int k = 0; k < count; ++k) {
      if (!active[k] || k == keep || k == drop) continue;
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Single: merged = std::min(link(keep, k), link(drop, k)); break;
        case Linkage::Complete: merged = std::max(link(keep, k), link(drop, k)); break;
        case Linkage::Average:
          merged = (size[keep] * link(keep, k) + size[drop] * link(drop, k)) /
                   static_cast<double>(size[keep] + size[drop]);
          break;
      }
      link(keep, k) = merged;
      link(k, keep) = merged;
    }
    size[keep] += size[drop];
    rep[keep] = std::min(rep[keep], rep[drop]);
    active[drop] = false;
    for (int k = 0; k < count; ++k) {
      if (member_of[k] == drop) member_of[k] = keep;
    }
    --remaining;
  }

  // Compact cluster ids in order of representative.
  std::vector<std::pair<int, int>> reps;  // (representative, slot)
  for (int i = 0; i < count; ++i) {
    if (active[i]) reps.emplace_back(rep[i], i);
  }
  std::sort(reps.begin(), reps.end());
  std::vector<int> id_of(count, -1);
  for (std::size_t c = 0; c < reps.size(); ++c) id_of[reps[c].second] = static_cast<int>(c);

  ClusteringResult result;
  result.assignments.resize(count);
  for (int i = 0; i < count; ++i) result.assignments[i] = id_of[member_of[i]];
  return result;
}

namespace {

Eigen::MatrixXd series_matrix(const std::vector<std::vector<double>>& series) {
  const int count = static_cast<int>(series.size());
  if (count < 2) throw std::invalid_argument("tsc: need at least 2 observations");
  const std::size_t len = series.front().size();
  for (const auto& x : series) {
    if (x.size() != len || len == 0) {
      throw std::invalid_argument("tsc: observations must share a nonzero length");
    }
  }
  Eigen::MatrixXd data(count, static_cast<Eigen::Index>(len));
  for (int i = 0; i < count; ++i) {
    for (std::size_t n = 0; n < len; ++n) data(i, static_cast<Eigen::Index>(n)) = series[i][n];
  }
  return data;
}

std::vector<std::vector<int>> tsc_sets_from_gram(const Eigen::MatrixXd& gram, int num_neighbors) {
  const int count = static_cast<int>(gram.rows());
  if (num_neighbors < 1 || num_neighbors > count - 1) {
    throw std::invalid_argument("tsc: num_neighbors must be in [1, N-1]");
  }
  std::vector<std::vector<int>> sets(count);
  std::vector<int> order(count);
  for (int j = 0; j < count; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return gram(j, a) > gram(j, b);
    });
    sets[j].reserve(num_neighbors);
    for (int i : order) {
      if (i == j) continue;
      sets[j].push_back(i);
      if (static_cast<int>(sets[j].size()) == num_neighbors) break;
    }
  }
  return sets;
}

}  // namespace

std::vector<std::vector<int>> tsc_neighbor_sets(const std::vector<std::vector<double>>& series,
                                                int num_neighbors) {
  const Eigen::MatrixXd data = series_matrix(series);
  return tsc_sets_from_gram((data * data.transpose()).cwiseAbs(), num_neighbors);
}

ClusteringResult tsc_baseline(const std::vector<std::vector<double>>& series, int num_clusters,
                              int num_neighbors, std::uint64_t seed) {
  const Eigen::MatrixXd data = series_matrix(series);
  const int count = static_cast<int>(data.rows());
  Eigen::VectorXd norms = data.rowwise().norm();
  if (norms.minCoeff() <= 0.0) {
    throw std::invalid_argument("tsc_baseline: zero-norm observation");
  }
  const Eigen::MatrixXd gram = (data * data.transpose()).cwiseAbs();
  const std::vector<std::vector<int>> sets = tsc_sets_from_gram(gram, num_neighbors);

  Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(count, count);
  for (int j = 0; j < count; ++j) {
    for (int i : sets[j]) {
      const double cosine = gram(i, j) / (norms(i) * norms(j));
      directed(i, j) = std::exp(-2.0 * (1.0 - cosine));
    }
  }
  return spectral_cluster(directed + directed.transpose(), num_clusters, seed);
}

int count_cross_label_edges(const Eigen::MatrixXd& adjacency, const std::vector<int>& labels) {
  const int count = static_cast<int>(adjacency.rows());
  if (static_cast<int>(labels.size()) != count) {
    throw std::invalid_argument("count_cross_label_edges: label count mismatch");
  }
  int violations = 0;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      if (adjacency(i, j) > 0.0 && labels[i] != labels[j]) ++violations;
    }
  }
  return violations;
}

namespace detail {

std::vector<double> laplacian_spectrum(const Eigen::MatrixXd& adjacency) {
  return spectral_embedding(adjacency, 1).eigenvalues;
}

namespace {

double row_sq_dist(const Eigen::MatrixXd& points, int row, const Eigen::RowVectorXd& center) {
  return (points.row(row) - center).squaredNorm();
}

// Greedy k-means++: each new center is drawn from the D^2 distribution a few
// times and the candidate with the lowest resulting potential wins.
Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int num_clusters, Rng& rng) {
  const int count = static_cast<int>(points.rows());
  Eigen::MatrixXd centers(num_clusters, points.cols());
  centers.row(0) = points.row(rng.uniform_below(static_cast<std::uint32_t>(count)));
  if (num_clusters == 1) return centers;

  const int candidates = 2 + static_cast<int>(std::floor(std::log(num_clusters)));
  std::vector<double> dist2(count);
  for (int i = 0; i < count; ++i) dist2[i] = row_sq_dist(points, i, centers.row(0));

  for (int c = 1; c < num_clusters; ++c) {
    double total = 0.0;
    for (double d : dist2) total += d;
    int best_idx = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < candidates; ++trial) {
      int pick;
      if (total <= 0.0) {
        pick = (c - 1 + trial + 1) % count;  // all points coincide with centers
      } else {
        const double target = rng.uniform01() * total;
        double acc = 0.0;
        pick = count - 1;
        for (int i = 0; i < count; ++i) {
          acc += dist2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      }
      double potential = 0.0;
      for (int i = 0; i < count; ++i) {
        potential += std::min(dist2[i], row_sq_dist(points, i, points.row(pick)));
      }
      if (potential < best_potential) {
        best_potential = potential;
        best_idx = pick;
      }
    }
    centers.row(c) = points.row(best_idx);
    for (int i = 0; i < count; ++i) {
      dist2[i] = std::min(dist2[i], row_sq_dist(points, i, centers.row(c)));
    }
  }
  return centers;
}

}  // namespace

KmeansResult kmeans_rows(const Eigen::MatrixXd& points, int num_clusters, int restarts,
                         int max_iterations, std::uint64_t seed) {
  const int count = static_cast<int>(points.rows());
  if (num_clusters < 1 || num_clusters > count) {
    throw std::invalid_argument("kmeans_rows: num_clusters must be in [1, N]");
  }

  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(restart)));
    Eigen::MatrixXd centers = seed_centers(points, num_clusters, rng);
    std::vector<int> labels(count, -1);

    for (int iteration = 0; iteration < max_iterations; ++iteration) {
      std::vector<int> next(count);
      for (int i = 0; i < count; ++i) {
        int arg = 0;
        double lowest = row_sq_dist(points, i, centers.row(0));
        for (int c = 1; c < num_clusters; ++c) {
          const double d = row_sq_dist(points, i, centers.row(c));
          if (d < lowest) {
            lowest = d;
            arg = c;
          }
        }
        next[i] = arg;
      }

      // Repopulate empty clusters with the worst-served point.
      std::vector<int> members(num_clusters, 0);
      for (int v : next) ++members[v];
      for (int c = 0; c < num_clusters; ++c) {
        if (members[c] > 0) continue;
        int worst = -1;
        double worst_dist = -1.0;
        for (int i = 0; i < count; ++i) {
          if (members[next[i]] <= 1) continue;
          const double d = row_sq_dist(points, i, centers.row(next[i]));
          if (d > worst_dist) {
            worst_dist = d;
            worst = i;
          }
        }
        if (worst < 0) break;
        --members[next[worst]];
        next[worst] = c;
        members[c] = 1;
        centers.row(c) = points.row(worst);
      }

      const bool converged = (next == labels);
      labels = std::move(next);
      for (int c = 0; c < num_clusters; ++c) {
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(points.cols());
        int n = 0;
        for (int i = 0; i < count; ++i) {
          if (labels[i] != c) continue;
          sum += points.row(i);
          ++n;
        }
        if (n > 0) centers.row(c) = sum / n;
      }
      if (converged) break;
    }

    double inertia = 0.0;
    for (int i = 0; i < count; ++i) inertia += row_sq_dist(points, i, centers.row(labels[i]));
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.labels = labels;
    }
  }
  return best;
}

}  // namespace detail

}  // namespace psdclust
