#include "aniso/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aniso::detail {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

namespace {

// Twiddle table w[j] = e^{-2 pi i j / n} (forward sign), j < n/2.
std::vector<std::complex<double>> make_twiddles(std::size_t n, bool inverse) {
    std::vector<std::complex<double>> w(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sign * 2.0 * std::numbers::pi *
                           static_cast<double>(j) / static_cast<double>(n);
        w[j] = {std::cos(ang), std::sin(ang)};
    }
    return w;
}

void fft_inplace(std::complex<double>* a, std::size_t n,
                 const std::vector<std::complex<double>>& w) {
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w[j * step];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

} // namespace

void fourier_transform_nd(std::vector<std::complex<double>>& data,
                          std::span<const std::size_t> sizes, bool inverse) {
    std::size_t total = 1;
    for (std::size_t s : sizes) {
        if (!is_power_of_two(s))
            throw std::invalid_argument("fourier_transform_nd: size not a power of two");
        total *= s;
    }
    if (data.size() != total)
        throw std::invalid_argument("fourier_transform_nd: data size mismatch");

    // Transform along each axis; gather strided rows into a contiguous buffer.
    std::size_t stride_after = 1; // product of sizes after the current axis
    for (std::size_t axis = sizes.size(); axis-- > 0;) {
        const std::size_t n = sizes[axis];
        const auto w = make_twiddles(n, inverse);
        const std::size_t rows = total / n;
        std::vector<std::complex<double>> buf(n);
        for (std::size_t r = 0; r < rows; ++r) {
            // Decompose the row id into (outer, inner) around this axis.
            const std::size_t inner = r % stride_after;
            const std::size_t outer = r / stride_after;
            const std::size_t base = outer * n * stride_after + inner;
            if (stride_after == 1) {
                fft_inplace(data.data() + base, n, w);
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    buf[i] = data[base + i * stride_after];
                fft_inplace(buf.data(), n, w);
                for (std::size_t i = 0; i < n; ++i)
                    data[base + i * stride_after] = buf[i];
            }
        }
        stride_after *= n;
    }
}

} // namespace aniso::detail
