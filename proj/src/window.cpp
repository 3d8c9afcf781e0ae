#include "psdclust/window.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace psdclust {

WindowFunction bartlett_window(int length) {
  if (length < 3) throw std::invalid_argument("bartlett_window: length must be >= 3");
  if (length % 2 == 0) throw std::invalid_argument("bartlett_window: length must be odd");
  const int half = length / 2;
  WindowFunction window;
  window.weights.resize(half + 1);
  for (int m = 0; m <= half; ++m) {
    window.weights[m] = 1.0 - static_cast<double>(m) / half;
  }
  window.dtft_bound = static_cast<double>(half);
  return window;
}

WindowFunction bias_corrected_window(const WindowFunction& window, double sampling_prob) {
  if (!(sampling_prob > 0.0) || sampling_prob > 1.0) {
    throw std::invalid_argument("bias_corrected_window: sampling_prob must be in (0, 1]");
  }
  WindowFunction corrected = window;
  const double p2 = sampling_prob * sampling_prob;
  if (!corrected.weights.empty()) corrected.weights[0] = window.weights[0] / sampling_prob;
  for (std::size_t m = 1; m < corrected.weights.size(); ++m) {
    corrected.weights[m] = window.weights[m] / p2;
  }
  corrected.dtft_bound = window.dtft_bound / p2;
  return corrected;
}

double window_dtft_max(const WindowFunction& window, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("window_dtft_max: grid too small");
  const int half = window.half_support();
  double best = 0.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double freq = static_cast<double>(k) / static_cast<double>(grid_size);
    double value = window.weights.empty() ? 0.0 : window.weights[0];
    for (int m = 1; m <= half; ++m) {
      value += 2.0 * window.weights[m] * std::cos(2.0 * std::numbers::pi * freq * m);
    }
    best = std::max(best, std::abs(value));
  }
  return best;
}

WindowFunction make_window(std::vector<double> half_weights) {
  if (half_weights.empty()) throw std::invalid_argument("make_window: empty weights");
  WindowFunction window;
  window.weights = std::move(half_weights);
  window.dtft_bound = window_dtft_max(window, std::size_t{1} << 16);
  return window;
}

}  // namespace psdclust
