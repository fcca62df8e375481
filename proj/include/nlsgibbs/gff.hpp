#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "nlsgibbs/disc_spectrum.hpp"

namespace nlsgibbs {

/// Draws of the free field u = sum g_n e_n / k_n. Every Gaussian g_n is a pure function of
/// (seed, stream, draw index, mode), so truncations are nested and parallel runs reproducible.
class GaussianSampler {
  public:
    GaussianSampler(const DiscEigenbasis &basis, std::uint64_t seed, std::uint32_t stream = 0)
        : basis_(&basis), seed_(seed), stream_(stream) {}

    [[nodiscard]] const DiscEigenbasis &basis() const noexcept { return *basis_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint32_t stream() const noexcept { return stream_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return next_; }

    [[nodiscard]] GaussianSampler with_stream(std::uint32_t stream) const {
        return GaussianSampler(*basis_, seed_, stream);
    }

    /// Next draw truncated to N modes; advances the stream.
    FieldCoeffs sample(std::size_t n);
    /// Draw number `draw`, without touching the stream position.
    [[nodiscard]] FieldCoeffs sample_at(std::uint64_t draw, std::size_t n) const;
    /// Modes (n_lo, n_hi] of draw `draw` (zero-based range [n_lo, n_hi)), other entries zero.
    [[nodiscard]] FieldCoeffs sample_band(std::uint64_t draw, std::size_t n_lo, std::size_t n_hi) const;
    [[nodiscard]] std::complex<double> gaussian(std::uint64_t draw, std::size_t mode) const;

  private:
    const DiscEigenbasis *basis_;
    std::uint64_t seed_;
    std::uint32_t stream_;
    std::uint64_t next_ = 0;
};

struct FieldFunctionals {
    double mass_l2 = 0.0;
    double l4_integral = 0.0;
    double hamiltonian_potential = 0.0;  // (1/p) int |u|^p
};

FieldFunctionals functionals(const FieldCoeffs &u, const DiscEigenbasis &basis, double p = 4.0);

struct MeanEstimate {
    double mean = 0.0;
    double stderr = 0.0;
    std::size_t samples = 0;
};

MeanEstimate mean_and_stderr(const std::vector<double> &values);

/// Monte-Carlo mean of ||P_{>N_cut} u||_{L^4} using the modes N_cut < n <= N_max.
MeanEstimate tail_l4_mean(const GaussianSampler &sampler, std::size_t n_cut, std::size_t n_max,
                          std::size_t samples);

/// prod_{n<=N} E[exp(c3 g_n^2 / 2)] = (1 - c3)^{-N/2} for real standard Gaussians g_n.
double gaussian_exponential_moment(double c3, std::size_t n);
MeanEstimate gaussian_exponential_moment_mc(double c3, std::size_t n, std::size_t samples, std::uint64_t seed);

void write_sample_csv(std::ostream &os, const FieldCoeffs &u);
FieldCoeffs read_sample_csv(std::istream &is);

}  // namespace nlsgibbs
