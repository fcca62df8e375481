#include "doctest.h"

#include <cmath>
#include <sstream>

#include "nlsgibbs/disc_spectrum.hpp"
#include "nlsgibbs/error.hpp"
#include "oracles.hpp"

using namespace nlsgibbs;

TEST_CASE("radial quadrature integrates polynomials in r exactly") {
    for (double R : {1.0, 3.5}) {
        const RadialQuadrature q = radial_quadrature(40, R);
        std::vector<double> one(q.size(), 1.0);
        std::vector<double> r2(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            r2[i] = q.nodes[i] * q.nodes[i];
        }
        CHECK(integrate(q, one) == doctest::Approx(M_PI * R * R).epsilon(1e-14));
        CHECK(integrate(q, r2) == doctest::Approx(M_PI * R * R * R * R / 2).epsilon(1e-14));
        CHECK(std::is_sorted(q.nodes.begin(), q.nodes.end()));
    }
    const RadialQuadrature q = radial_quadrature(10);
    CHECK_THROWS_AS(integrate(q, std::vector<double>(9, 1.0)), ShapeError);
}

TEST_CASE("basis functions match J0(z r / R) / (sqrt(pi) R |J1(z)|)") {
    const DiscEigenbasis b = DiscEigenbasis::build(32, DiscEigenbasis::default_quad_points(32), 2.0);
    for (std::size_t n : {0u, 5u, 31u}) {
        const double z = oracle::j0_zero(n + 1);
        for (double r : {0.0, 0.3, 1.1, 1.9}) {
            const double ref = oracle::j0(z * r / 2.0) / (std::sqrt(M_PI) * 2.0 * std::fabs(oracle::j1(z)));
            CHECK(b.eval(n, r) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
        }
        CHECK(std::fabs(b.eval(n, 2.0)) < 1e-12);
        CHECK(b.wavenumber(n) == doctest::Approx(z / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("Gram matrix is the identity and the self-test passes at N=256") {
    const DiscEigenbasis b = DiscEigenbasis::build(256);
    CHECK(b.quad().size() == DiscEigenbasis::default_quad_points(256));
    const Eigen::MatrixXd g = b.gram(256);
    CHECK((g - Eigen::MatrixXd::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("under-resolved quadrature is refused") {
    CHECK_THROWS_AS(DiscEigenbasis::build(64, 40), ResolutionError);
}

TEST_CASE("projection inverts synthesis and derivatives match finite differences") {
    const DiscEigenbasis b = DiscEigenbasis::build(48);
    FieldCoeffs u(48);
    for (std::size_t n = 0; n < 48; ++n) {
        u[n] = {std::sin(1.0 + n), std::cos(2.0 * n) / (1.0 + n)};
    }
    const FieldCoeffs back = b.project(b.synthesize(u));
    CHECK((back.coeffs - u.coeffs).cwiseAbs().maxCoeff() < 1e-12);
    const double h = 1e-6;
    for (double r : {0.2, 0.55, 0.9}) {
        const std::complex<double> fd = (b.eval_field(u, r + h) - b.eval_field(u, r - h)) / (2.0 * h);
        std::complex<double> d = 0.0;
        for (std::size_t n = 0; n < 48; ++n) {
            d += u[n] * b.eval_derivative(n, r);
        }
        CHECK(std::abs(fd - d) < 1e-6 * (1.0 + std::abs(d)));
    }
    // Dirichlet energy by quadrature of |u_r|^2 against the spectral sum.
    const Eigen::VectorXcd ur = b.synthesize_derivative(u);
    CHECK(integrate(b.quad(), ur.cwiseAbs2()) == doctest::Approx(h1_inner(u, u, b)).epsilon(1e-11));
    CHECK(integrate(b.quad(), b.synthesize(u).cwiseAbs2()) == doctest::Approx(l2_inner(u, u)).epsilon(1e-11));
    CHECK(h1_norm(u, b) == doctest::Approx(std::sqrt(h1_inner(u, u, b))));
    CHECK(l2_norm(u) == doctest::Approx(u.coeffs.norm()));
}

TEST_CASE("project_low keeps the length and zeros the tail") {
    FieldCoeffs u(10);
    u.coeffs.setConstant({1.0, -1.0});
    const FieldCoeffs low = project_low(u, 4);
    CHECK(low.size() == 10);
    CHECK(std::abs(low[3] - std::complex<double>(1.0, -1.0)) == 0.0);
    CHECK(std::abs(low[4]) == 0.0);
    CHECK_THROWS_AS(project_low(u, 11), ShapeError);
}

TEST_CASE("basis CSV round trip") {
    const DiscEigenbasis b = DiscEigenbasis::build(20);
    std::stringstream ss;
    b.write_csv(ss);
    CHECK(ss.str().rfind("n,z_n,norm\n", 0) == 0);
    const DiscEigenbasis c = DiscEigenbasis::read_csv(ss);
    REQUIRE(c.size() == 20);
    for (std::size_t n = 0; n < 20; ++n) {
        CHECK(c.zeros()[n] == b.zeros()[n]);
    }
}

TEST_CASE("L4 norms of basis functions grow at most like log^{1/4}") {
    const DiscEigenbasis b = DiscEigenbasis::build(256);
    double lo = 1e9;
    double hi = 0.0;
    for (std::size_t n = 0; n < 256; ++n) {
        const Eigen::VectorXd e = b.values().row(static_cast<Eigen::Index>(n)).transpose();
        const double l4 = std::pow(integrate(b.quad(), e.array().pow(4).matrix()), 0.25);
        const double ratio = l4 / std::pow(std::log(2.0 + n + 1), 0.25);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi < 2.0 * lo);
}
