#include "psdclust/spectra.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "psdclust/fft.hpp"

namespace psdclust {

void validate_observation(const Observation& obs) {
  if (obs.samples.size() < 2) throw std::invalid_argument("observation: need at least 2 samples");
  if (obs.mask.size() != obs.samples.size()) {
    throw std::invalid_argument("observation: mask length mismatch");
  }
  for (std::size_t n = 0; n < obs.samples.size(); ++n) {
    if (!std::isfinite(obs.samples[n])) {
      throw std::invalid_argument("observation: non-finite sample");
    }
    if (obs.mask[n] == 0 && obs.samples[n] != 0.0) {
      throw std::invalid_argument("observation: masked entry must be stored as zero");
    }
  }
}

std::size_t choose_grid_size(std::size_t obs_len) {
  std::size_t grid = 4096;
  while (grid < 2 * obs_len - 1) grid <<= 1;
  return grid;
}

double grid_mean(const PsdEstimate& psd) {
  if (psd.values.empty()) throw std::invalid_argument("grid_mean: empty PSD");
  double sum = 0.0;
  for (double v : psd.values) sum += v;
  return sum / static_cast<double>(psd.values.size());
}

AcfEstimate estimate_acf(const Observation& obs) {
  validate_observation(obs);
  const std::size_t len = obs.samples.size();
  // Linear autocorrelation through a zero-padded circular transform.
  const std::size_t padded = next_power_of_two(2 * len);
  std::vector<std::complex<double>> buf(padded);
  for (std::size_t n = 0; n < len; ++n) buf[n] = obs.samples[n];
  fft_inplace(buf, false);
  for (auto& v : buf) v = std::norm(v);
  fft_inplace(buf, true);

  AcfEstimate acf;
  acf.values.resize(len);
  for (std::size_t m = 0; m < len; ++m) {
    acf.values[m] = buf[m].real() / static_cast<double>(len);
  }
  return acf;
}

PsdEstimate bt_psd(const AcfEstimate& acf, const WindowFunction& window, std::size_t grid_size) {
  const std::size_t len = acf.values.size();
  if (len < 1) throw std::invalid_argument("bt_psd: empty ACF");
  if (grid_size < 2 * len - 1) throw std::invalid_argument("bt_psd: grid_size must be >= 2M-1");
  if (!is_power_of_two(grid_size)) {
    throw std::invalid_argument("bt_psd: grid_size must be a power of two");
  }
  const int half = window.half_support();
  if (half >= static_cast<int>(len)) {
    throw std::invalid_argument("bt_psd: window support must be smaller than the ACF length");
  }

  // Windowed lags, negative lags wrapped to the top of the buffer.
  std::vector<std::complex<double>> buf(grid_size);
  buf[0] = window.weights[0] * acf.values[0];
  for (int m = 1; m <= half; ++m) {
    const double v = window.weights[m] * acf.values[m];
    buf[m] += v;
    buf[grid_size - m] += v;
  }
  fft_inplace(buf, false);

  double max_abs = 0.0;
  double max_imag = 0.0;
  for (const auto& v : buf) {
    max_abs = std::max(max_abs, std::abs(v.real()));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  // Real even lag sequence, so the transform is real up to rounding.
  if (max_imag > 1e-9 * std::max(max_abs, 1e-300)) {
    throw std::runtime_error("bt_psd: unexpected imaginary residue");
  }

  PsdEstimate psd;
  psd.values.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) psd.values[k] = buf[k].real();
  return psd;
}

PsdEstimate normalize_power(const PsdEstimate& psd) {
  const double mean = grid_mean(psd);
  if (!(mean > 0.0)) throw std::invalid_argument("normalize_power: total power must be positive");
  PsdEstimate out = psd;
  for (double& v : out.values) v /= mean;
  return out;
}

}  // namespace psdclust
