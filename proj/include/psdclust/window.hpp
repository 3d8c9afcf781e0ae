#pragma once

#include <cstddef>
#include <vector>

namespace psdclust {

// Even finite-support lag window. weights[m] holds the weight shared by lags
// +-m, so evenness is structural. dtft_bound is an upper bound on the window
// DTFT magnitude over [0, 1).
struct WindowFunction {
  std::vector<double> weights;  // index 0..half_support
  double dtft_bound = 0.0;

  int half_support() const { return static_cast<int>(weights.size()) - 1; }
  double weight(int lag) const {
    const int m = lag < 0 ? -lag : lag;
    return m < static_cast<int>(weights.size()) ? weights[m] : 0.0;
  }
};

// Triangular lag window of odd length >= 3: weight 1 - |m|/(length/2) inside
// the half support, 0 outside. Its DTFT is the Fejer kernel, which peaks at
// f = 0, so the bound length/2 is exact.
WindowFunction bartlett_window(int length);

// Reweights a window so PSD estimates from Bernoulli-masked data become
// unbiased: lag 0 divided by sampling_prob, all other lags by its square.
// The DTFT bound becomes dtft_bound / sampling_prob^2.
WindowFunction bias_corrected_window(const WindowFunction& window, double sampling_prob);

// Window from explicit half weights; the DTFT bound is taken as the maximum
// of |DTFT| over a dense 2^16-point grid.
WindowFunction make_window(std::vector<double> half_weights);

// Maximum of |sum_m g[m] e^{-i2 pi f m}| over a uniform frequency grid.
double window_dtft_max(const WindowFunction& window, std::size_t grid_size);

}  // namespace psdclust
