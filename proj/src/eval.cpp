#include "psdclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace psdclust {

long long ConfusionMatrix::total() const {
  long long sum = 0;
  for (long long c : counts) sum += c;
  return sum;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("confusion_matrix: length mismatch");
  }
  if (predicted.empty()) throw std::invalid_argument("confusion_matrix: empty input");

  std::map<int, int> pred_ids, truth_ids;
  for (int v : predicted) pred_ids.emplace(v, 0);
  for (int v : truth) truth_ids.emplace(v, 0);
  int next = 0;
  for (auto& [key, id] : pred_ids) id = next++;
  next = 0;
  for (auto& [key, id] : truth_ids) id = next++;

  ConfusionMatrix confusion;
  confusion.size = std::max(static_cast<int>(pred_ids.size()), static_cast<int>(truth_ids.size()));
  confusion.counts.assign(static_cast<std::size_t>(confusion.size) * confusion.size, 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int row = truth_ids[truth[i]];
    const int col = pred_ids[predicted[i]];
    ++confusion.counts[static_cast<std::size_t>(row) * confusion.size + col];
  }
  return confusion;
}

namespace detail {

long long best_match_bruteforce(const ConfusionMatrix& confusion) {
  std::vector<int> rows(confusion.size);
  std::iota(rows.begin(), rows.end(), 0);
  long long best = 0;
  do {
    long long matched = 0;
    for (int col = 0; col < confusion.size; ++col) matched += confusion.at(rows[col], col);
    best = std::max(best, matched);
  } while (std::next_permutation(rows.begin(), rows.end()));
  return best;
}

// Hungarian algorithm with potentials, O(L^3). Costs are integer-valued
// doubles, so all arithmetic stays exact.
long long best_match_assignment(const ConfusionMatrix& confusion) {
  const int n = confusion.size;
  long long max_count = 0;
  for (long long c : confusion.counts) max_count = std::max(max_count, c);

  auto cost = [&](int row, int col) {
    return static_cast<double>(max_count - confusion.at(row, col));
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<int> matched_row(n + 1, 0);  // matched_row[col] = row
  std::vector<int> prev_col(n + 1, 0);

  for (int row = 1; row <= n; ++row) {
    matched_row[0] = row;
    int col0 = 0;
    std::vector<double> min_reduced(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int row0 = matched_row[col0];
      double delta = inf;
      int col1 = -1;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double reduced = cost(row0 - 1, col - 1) - row_pot[row0] - col_pot[col];
        if (reduced < min_reduced[col]) {
          min_reduced[col] = reduced;
          prev_col[col] = col0;
        }
        if (min_reduced[col] < delta) {
          delta = min_reduced[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          row_pot[matched_row[col]] += delta;
          col_pot[col] -= delta;
        } else {
          min_reduced[col] -= delta;
        }
      }
      col0 = col1;
    } while (matched_row[col0] != 0);
    do {
      const int col1 = prev_col[col0];
      matched_row[col0] = matched_row[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  long long matched = 0;
  for (int col = 1; col <= n; ++col) matched += confusion.at(matched_row[col] - 1, col - 1);
  return matched;
}

}  // namespace detail

double clustering_error(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const ConfusionMatrix confusion = confusion_matrix(predicted, truth);
  const long long matched = confusion.size <= 8 ? detail::best_match_bruteforce(confusion)
                                                : detail::best_match_assignment(confusion);
  return 1.0 - static_cast<double>(matched) / static_cast<double>(predicted.size());
}

double confusion_entropy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const ConfusionMatrix confusion = confusion_matrix(predicted, truth);
  const double total = static_cast<double>(confusion.total());

  int truth_classes = 0;
  for (int row = 0; row < confusion.size; ++row) {
    long long row_sum = 0;
    for (int col = 0; col < confusion.size; ++col) row_sum += confusion.at(row, col);
    if (row_sum > 0) ++truth_classes;
  }
  if (truth_classes <= 1) return 0.0;

  double entropy = 0.0;
  for (int col = 0; col < confusion.size; ++col) {
    long long cluster_size = 0;
    for (int row = 0; row < confusion.size; ++row) cluster_size += confusion.at(row, col);
    if (cluster_size == 0) continue;
    double cluster_entropy = 0.0;
    for (int row = 0; row < confusion.size; ++row) {
      const long long count = confusion.at(row, col);
      if (count == 0) continue;
      const double frac = static_cast<double>(count) / static_cast<double>(cluster_size);
      cluster_entropy -= frac * std::log(frac);
    }
    entropy += (static_cast<double>(cluster_size) / total) * cluster_entropy;
  }
  return entropy / std::log(static_cast<double>(truth_classes));
}

}  // namespace psdclust
