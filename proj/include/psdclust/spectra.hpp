#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psdclust/window.hpp"

namespace psdclust {

// One finite-length real sample path. Entries removed by the observation mask
// are stored as zeros, which is exactly how they enter the ACF sums.
struct Observation {
  static constexpr int kNoLabel = -1;

  std::vector<double> samples;
  std::vector<std::uint8_t> mask;  // 1 = observed
  int label = kNoLabel;

  std::size_t length() const { return samples.size(); }
  bool has_label() const { return label != kNoLabel; }
};

void validate_observation(const Observation& obs);

// Biased sample autocorrelation, lags 0..M-1. Negative lags follow by
// evenness. On masked data |values[m]| <= values[0] need not hold.
struct AcfEstimate {
  std::vector<double> values;
};

// Real PSD values on the uniform grid f_k = k/F, k = 0..F-1. Estimates made
// with a bias-corrected window may be negative.
struct PsdEstimate {
  std::vector<double> values;
  std::size_t grid_size() const { return values.size(); }
};

// Smallest power of two >= max(2*obs_len - 1, 4096).
std::size_t choose_grid_size(std::size_t obs_len);

double grid_mean(const PsdEstimate& psd);

AcfEstimate estimate_acf(const Observation& obs);

// Windowed transform of the lag sequence: values[k] = sum_{|m|<M} g[m] r[m]
// e^{-i2 pi km/F}. grid_size must be a power of two >= 2M-1 and the window
// support must be < M. The transform of a real even sequence is real; the
// tiny imaginary residue is checked to be < 1e-9 of the peak and dropped.
PsdEstimate bt_psd(const AcfEstimate& acf, const WindowFunction& window, std::size_t grid_size);

// Rescales to unit mean over the grid. Rejects non-positive total power.
PsdEstimate normalize_power(const PsdEstimate& psd);

}  // namespace psdclust
