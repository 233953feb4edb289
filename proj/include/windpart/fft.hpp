#pragma once

#include "windpart/error.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace windpart::fft {

using cplx = std::complex<double>;

constexpr std::size_t next_pow2(std::size_t n) noexcept { return n <= 1 ? 1 : std::bit_ceil(n); }

/// In-place iterative radix-2 transform. `inverse` applies the 1/N scaling.
inline void transform(std::span<cplx> a, bool inverse = false)
{
    const std::size_t n = a.size();
    if (n == 0)
        return;
    if (!std::has_single_bit(n))
        throw Error(Errc::InvalidArgument, "FFT length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::size_t half = len / 2;
        // Twiddles computed directly rather than by repeated multiplication
        // to keep rounding error flat for long transforms.
        std::vector<cplx> w(half);
        for (std::size_t k = 0; k < half; ++k)
            w[k] = std::polar(1.0, ang * static_cast<double>(k));
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * w[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& v : a)
            v *= inv;
    }
}

} // namespace windpart::fft
