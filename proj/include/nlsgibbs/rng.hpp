#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace nlsgibbs::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

inline Counter philox_round(const Counter &c, const Key &k) {
    std::uint32_t hi0;
    std::uint32_t lo0;
    std::uint32_t hi1;
    std::uint32_t lo1;
    mulhilo(0xD2511F53u, c[0], hi0, lo0);
    mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace detail

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
inline Counter philox4x32(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        ctr = detail::philox_round(ctr, key);
    }
    return ctr;
}

/// 53-bit uniform in (0, 1].
inline double unit_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

/// Complex Gaussian with E|g|^2 = 1 (real and imaginary parts N(0, 1/2)) for the given
/// (seed, stream, draw, mode) coordinates.
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint32_t stream, std::uint64_t draw,
                                             std::uint32_t mode) {
    const Counter out = philox4x32(
        {static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32), mode, stream},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const double radius = std::sqrt(-std::log(unit_open(out[0], out[1])));
    const double angle = 2.0 * std::numbers::pi * unit_open(out[2], out[3]);
    return std::polar(radius, angle);
}

}  // namespace nlsgibbs::rng
