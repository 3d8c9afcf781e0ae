#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace psdclust {

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n);

// In-place radix-2 FFT. The size must be a power of two. The forward
// transform uses the e^{-i2*pi*km/n} kernel; the inverse divides by n.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace psdclust
