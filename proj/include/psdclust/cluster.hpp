#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "psdclust/distance.hpp"

namespace psdclust {

// q-nearest-neighbor graph. Column j of Z holds exp(-2 d(i,j)) for i in the
// neighbor set of j; the adjacency is Z + Z^T, so entries lie in [0, 2].
struct NeighborGraph {
  std::vector<std::vector<int>> neighbor_sets;
  Eigen::MatrixXd adjacency;
};

struct ClusteringResult {
  std::vector<int> assignments;          // cluster ids 0..L-1
  std::vector<int> center_indices;       // farthest-point centers
  std::vector<PsdEstimate> center_psds;  // refined centroids
  std::vector<double> eigenvalues;       // ascending Laplacian spectrum
  std::optional<int> nfc_violations;     // cross-label edges vs. ground truth
};

// For each i, the num_neighbors indices j != i with smallest distance.
// Ties break toward the smaller index.
std::vector<std::vector<int>> knn_sets(const DistanceMatrix& distances, int num_neighbors);

NeighborGraph nnpc_adjacency(const DistanceMatrix& distances, int num_neighbors);

// Normalized spectral clustering: eigenvectors of the num_clusters smallest
// eigenvalues of I - D^{-1/2} A D^{-1/2}, rows normalized to unit length
// (zero rows stay zero), then k-means on the rows (greedy k-means++ seeding,
// 20 restarts, 100 iterations). Deterministic given the seed. Rejects
// non-symmetric adjacencies and graphs with an isolated node.
ClusteringResult spectral_cluster(const Eigen::MatrixXd& adjacency, int num_clusters,
                                  std::uint64_t seed = 0);

// Cluster-count estimate: position of the largest gap in the ascending
// normalized-Laplacian spectrum, searched below max_clusters.
int eigengap_estimate(const Eigen::MatrixXd& adjacency, int max_clusters);

// Nearest-neighbor process clustering: pairwise PSD distances, exp(-2d)
// neighbor graph, normalized spectral clustering. When ground-truth labels
// are supplied, the number of cross-label graph edges is reported.
ClusteringResult nnpc(const std::vector<PsdEstimate>& psds, int num_clusters, int num_neighbors,
                      Metric metric = Metric::L1, std::uint64_t seed = 0,
                      const std::vector<int>* truth_labels = nullptr);

// Single k-means pass with farthest-point initialization: center 0 is
// observation 0, each further center maximizes the minimum distance to the
// chosen ones, then every observation joins its nearest center. All ties
// break toward the smaller index.
ClusteringResult km_farthest(const DistanceMatrix& distances, int num_clusters);

// km_farthest followed by centroid refinement: centers become pointwise means
// of the member PSD estimates, observations reassign to the nearest center
// under the same metric. Stops when assignments stabilize or after
// `iterations`. An emptied cluster keeps its previous center.
ClusteringResult kmit(const std::vector<PsdEstimate>& psds, int num_clusters,
                      int iterations = 100, Metric metric = Metric::L1);

enum class Linkage { Single, Average, Complete };

// Agglomerative clustering from singletons down to num_clusters. Merge ties
// break by the smallest pair of cluster representatives.
ClusteringResult hierarchical(const DistanceMatrix& distances, Linkage linkage, int num_clusters);

// Neighbor sets by largest inner-product magnitude |<x_j, x_i>|, ties toward
// the smaller index.
std::vector<std::vector<int>> tsc_neighbor_sets(const std::vector<std::vector<double>>& series,
                                                int num_neighbors);

// Baseline that treats observations as plain vectors: neighbor sets by
// largest |<x_j, x_i>|, edge weights exp(-2 (1 - |<x_j,x_i>|/(|x_j||x_i|))),
// then normalized spectral clustering. Rejects zero-norm observations.
ClusteringResult tsc_baseline(const std::vector<std::vector<double>>& series, int num_clusters,
                              int num_neighbors, std::uint64_t seed = 0);

// Number of undirected graph edges joining differently labeled nodes.
int count_cross_label_edges(const Eigen::MatrixXd& adjacency, const std::vector<int>& labels);

namespace detail {

struct KmeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

KmeansResult kmeans_rows(const Eigen::MatrixXd& points, int num_clusters, int restarts,
                         int max_iterations, std::uint64_t seed);

// Ascending eigenvalues of the symmetric normalized Laplacian of `adjacency`.
std::vector<double> laplacian_spectrum(const Eigen::MatrixXd& adjacency);

}  // namespace detail

}  // namespace psdclust
