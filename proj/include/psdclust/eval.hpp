#pragma once

#include <vector>

namespace psdclust {

// Square contingency table, rows = true labels, columns = predicted clusters,
// both compacted to 0..L-1 in ascending label order.
struct ConfusionMatrix {
  int size = 0;
  std::vector<long long> counts;  // row-major

  long long at(int truth_row, int predicted_col) const {
    return counts[static_cast<std::size_t>(truth_row) * size + predicted_col];
  }
  long long total() const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& truth);

// Permutation-minimized fraction of misassigned points,
// min_pi (1/N) #{i : pi(predicted_i) != truth_i}. Exhaustive over
// permutations for L <= 8, linear assignment beyond.
double clustering_error(const std::vector<int>& predicted, const std::vector<int>& truth);

// Normalized conditional entropy of the confusion matrix:
// sum_j (n_j/N) H(truth | cluster j) / log(number of true classes).
double confusion_entropy(const std::vector<int>& predicted, const std::vector<int>& truth);

namespace detail {

// Largest achievable matched count over cluster relabelings; the two routes
// must agree exactly.
long long best_match_bruteforce(const ConfusionMatrix& confusion);
long long best_match_assignment(const ConfusionMatrix& confusion);

}  // namespace detail

}  // namespace psdclust
