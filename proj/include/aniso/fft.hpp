#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace aniso::detail {

// Unnormalized radix-2 DFT along every axis of a row-major nD array:
//   forward: X_k = sum_i x_i e^{-2 pi i <i,k>/N},  inverse: e^{+...} (no 1/N).
// Every size must be a power of two.
void fourier_transform_nd(std::vector<std::complex<double>>& data,
                          std::span<const std::size_t> sizes, bool inverse);

bool is_power_of_two(std::size_t n);

} // namespace aniso::detail
