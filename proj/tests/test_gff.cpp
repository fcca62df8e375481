#include "doctest.h"

#include <cmath>
#include <sstream>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/gff.hpp"
#include "nlsgibbs/rng.hpp"

using namespace nlsgibbs;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using rng::Counter;
    using rng::Key;
    CHECK(rng::philox4x32(Counter{0, 0, 0, 0}, Key{0, 0}) == Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(rng::philox4x32(Counter{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, Key{0xffffffff, 0xffffffff}) ==
          Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(rng::philox4x32(Counter{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, Key{0xa4093822, 0x299f31d0}) ==
          Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("complex Gaussians: unit variance, circular, uniforms in (0,1]") {
    double m2 = 0.0;
    double re2 = 0.0;
    std::complex<double> g2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto g = rng::complex_gaussian(5, 1, static_cast<std::uint64_t>(i), 3);
        m2 += std::norm(g);
        re2 += g.real() * g.real();
        g2 += g * g;
    }
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(g2 / static_cast<double>(n)) < 0.01);
    CHECK(rng::unit_open(0, 0) > 0.0);
    CHECK(rng::unit_open(0xffffffff, 0xffffffff) <= 1.0);
}

TEST_CASE("sampler determinism, streams and the cursor") {
    const DiscEigenbasis b = DiscEigenbasis::build(32);
    GaussianSampler s(b, 42);
    const FieldCoeffs a = s.sample_at(7, 32);
    CHECK(a.coeffs == s.sample_at(7, 32).coeffs);
    CHECK(a.coeffs != s.with_stream(1).sample_at(7, 32).coeffs);
    CHECK(a.coeffs.head(8) == s.sample_at(7, 8).coeffs);
    const FieldCoeffs band = s.sample_band(7, 4, 12);
    CHECK(band.coeffs.segment(4, 8) == a.coeffs.segment(4, 8));
    CHECK(band.coeffs.head(4).norm() == 0.0);
    CHECK(s.position() == 0);
    const FieldCoeffs first = s.sample(32);
    CHECK(first.coeffs == s.sample_at(0, 32).coeffs);
    CHECK(s.position() == 1);
    CHECK(a[3] == s.gaussian(7, 3) / b.wavenumber(3));
}

TEST_CASE("mass and quartic moments match the covariance (-Delta)^{-1}") {
    const DiscEigenbasis b = DiscEigenbasis::build(64);
    const GaussianSampler s(b, 11);
    double mass_exact = 0.0;
    for (std::size_t n = 0; n < 64; ++n) {
        mass_exact += 1.0 / b.eigenvalue(n);
    }
    // E|u(r)|^4 = 2 (E|u(r)|^2)^2 for a circular complex Gaussian.
    Eigen::VectorXd var = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.quad().size()));
    for (std::size_t n = 0; n < 64; ++n) {
        var += b.values().row(static_cast<Eigen::Index>(n)).transpose().cwiseAbs2() / b.eigenvalue(n);
    }
    const double l4_exact = 2.0 * integrate(b.quad(), var.cwiseAbs2());
    std::vector<double> mass;
    std::vector<double> l4;
    for (std::uint64_t i = 0; i < 4000; ++i) {
        const FieldFunctionals f = functionals(s.sample_at(i, 64), b);
        mass.push_back(f.mass_l2);
        l4.push_back(f.l4_integral);
        REQUIRE(f.hamiltonian_potential == doctest::Approx(f.l4_integral / 4.0));
    }
    const MeanEstimate m = mean_and_stderr(mass);
    const MeanEstimate q = mean_and_stderr(l4);
    CHECK(std::fabs(m.mean - mass_exact) < 4.0 * m.stderr);
    CHECK(std::fabs(q.mean - l4_exact) < 4.0 * q.stderr);
}

TEST_CASE("mean_and_stderr") {
    const MeanEstimate e = mean_and_stderr({1.0, 2.0, 3.0, 4.0});
    CHECK(e.mean == 2.5);
    CHECK(e.stderr == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK_THROWS_AS(mean_and_stderr({1.0}), StatisticsError);
}

TEST_CASE("Gaussian exponential moment against Monte Carlo") {
    CHECK(gaussian_exponential_moment(0.0, 5) == 1.0);
    CHECK(gaussian_exponential_moment(0.5, 2) == doctest::Approx(2.0));
    const MeanEstimate mc = gaussian_exponential_moment_mc(0.3, 3, 200000, 9);
    CHECK(std::fabs(mc.mean - gaussian_exponential_moment(0.3, 3)) < 4.0 * mc.stderr);
    CHECK_THROWS_AS(gaussian_exponential_moment(1.0, 1), DivergenceError);
    CHECK_THROWS_AS(gaussian_exponential_moment(-0.1, 1), DomainError);
}

TEST_CASE("tail L4 mean") {
    const DiscEigenbasis b = DiscEigenbasis::build(128);
    const GaussianSampler s(b, 3);
    CHECK(tail_l4_mean(s, 64, 64, 100).mean == 0.0);
    CHECK_THROWS_AS(tail_l4_mean(s, 65, 64, 100), DomainError);
    const MeanEstimate lo = tail_l4_mean(s, 16, 32, 500);
    const MeanEstimate hi = tail_l4_mean(s, 64, 128, 500);
    CHECK(hi.mean < lo.mean);
}

TEST_CASE("sample CSV round trip") {
    const DiscEigenbasis b = DiscEigenbasis::build(16);
    const FieldCoeffs u = GaussianSampler(b, 1).sample_at(0, 16);
    std::stringstream ss;
    write_sample_csv(ss, u);
    CHECK(ss.str().rfind("n,re,im\n", 0) == 0);
    CHECK(read_sample_csv(ss).coeffs == u.coeffs);
}
