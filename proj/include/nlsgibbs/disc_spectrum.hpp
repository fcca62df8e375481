#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlsgibbs/bessel.hpp"

namespace nlsgibbs {

/// Gauss-Legendre rule on (0, R) for 2*pi * int_0^R f(r) r dr. The factor 2*pi*r is folded
/// into `weights`, so integrating f == 1 returns the disc area.
struct RadialQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    double radius = 1.0;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

RadialQuadrature radial_quadrature(std::size_t points, double radius = 1.0);

double integrate(const RadialQuadrature &quad, const std::vector<double> &f);
double integrate(const RadialQuadrature &quad, const Eigen::Ref<const Eigen::VectorXd> &f);

/// Complex coefficients c_n of u = sum c_n e_n (index 0 holds the first mode).
struct FieldCoeffs {
    Eigen::VectorXcd coeffs;

    FieldCoeffs() = default;
    explicit FieldCoeffs(std::size_t n) : coeffs(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))) {}
    explicit FieldCoeffs(Eigen::VectorXcd c) : coeffs(std::move(c)) {}

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(coeffs.size()); }
    std::complex<double> &operator[](std::size_t n) { return coeffs[static_cast<Eigen::Index>(n)]; }
    const std::complex<double> &operator[](std::size_t n) const { return coeffs[static_cast<Eigen::Index>(n)]; }

    FieldCoeffs &operator+=(const FieldCoeffs &o);
    FieldCoeffs &operator-=(const FieldCoeffs &o);
    FieldCoeffs &operator*=(std::complex<double> s);
};

FieldCoeffs operator+(FieldCoeffs a, const FieldCoeffs &b);
FieldCoeffs operator-(FieldCoeffs a, const FieldCoeffs &b);
FieldCoeffs operator*(std::complex<double> s, FieldCoeffs a);

/// Dirichlet radial eigenfunctions e_n(r) = J0(k_n r)/norm_n of -Delta on the disc of
/// radius R, k_n = z_n / R, tabulated on a Gauss-Legendre grid.
class DiscEigenbasis {
  public:
    static DiscEigenbasis build(std::size_t n, std::size_t quad_points, double radius = 1.0);
    static DiscEigenbasis build(std::size_t n) { return build(n, default_quad_points(n)); }

    /// ceil(4 z_N / pi) plus a safety margin; enough to resolve products of two modes.
    static std::size_t default_quad_points(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return zeros_.size(); }
    [[nodiscard]] double radius() const noexcept { return quad_.radius; }
    [[nodiscard]] const bessel::BesselZeroTable &zeros() const noexcept { return zeros_; }
    [[nodiscard]] const std::vector<double> &norms() const noexcept { return norms_; }
    [[nodiscard]] const RadialQuadrature &quad() const noexcept { return quad_; }

    /// k_n = z_n / R and the eigenvalue k_n^2.
    [[nodiscard]] double wavenumber(std::size_t n) const { return zeros_[n] / quad_.radius; }
    [[nodiscard]] double eigenvalue(std::size_t n) const {
        const double k = wavenumber(n);
        return k * k;
    }
    [[nodiscard]] const Eigen::VectorXd &wavenumbers() const noexcept { return k_; }

    /// e_n at the quadrature nodes, shape (N, Q).
    [[nodiscard]] const Eigen::MatrixXd &values() const noexcept { return values_; }
    /// e_n' at the quadrature nodes, shape (N, Q).
    [[nodiscard]] const Eigen::MatrixXd &derivatives() const noexcept { return derivs_; }
    [[nodiscard]] const Eigen::VectorXd &weights() const noexcept { return w_; }

    [[nodiscard]] double eval(std::size_t n, double r) const;
    [[nodiscard]] double eval_derivative(std::size_t n, double r) const;

    /// Field values on the quadrature grid: real and imaginary parts separately.
    [[nodiscard]] Eigen::VectorXcd synthesize(const FieldCoeffs &u) const;
    [[nodiscard]] Eigen::VectorXcd synthesize_derivative(const FieldCoeffs &u) const;
    [[nodiscard]] std::complex<double> eval_field(const FieldCoeffs &u, double r) const;

    /// c_n = int f e_n over the disc, truncated to the first `m` modes (m = 0 means all).
    [[nodiscard]] FieldCoeffs project(const Eigen::VectorXcd &grid_values, std::size_t m = 0) const;
    [[nodiscard]] FieldCoeffs project(const Eigen::VectorXd &grid_values, std::size_t m = 0) const;

    /// Gram matrix <e_n, e_m> by quadrature for the first m modes.
    [[nodiscard]] Eigen::MatrixXd gram(std::size_t m) const;

    void write_csv(std::ostream &os) const;
    /// Rebuild from a CSV dump (n, z_n, norm); the zeros are taken from the file.
    static DiscEigenbasis read_csv(std::istream &is, std::size_t quad_points = 0, double radius = 1.0);

  private:
    static DiscEigenbasis assemble(bessel::BesselZeroTable zeros, std::size_t quad_points, double radius);

    bessel::BesselZeroTable zeros_;
    std::vector<double> norms_;
    RadialQuadrature quad_;
    Eigen::VectorXd k_;
    Eigen::VectorXd w_;
    Eigen::MatrixXd values_;
    Eigen::MatrixXd derivs_;
};

FieldCoeffs project_low(const FieldCoeffs &u, std::size_t m);

/// Re sum k_n^2 c_n(u) conj(c_n(v)).
double h1_inner(const FieldCoeffs &u, const FieldCoeffs &v, const DiscEigenbasis &basis);
/// Re sum c_n(u) conj(c_n(v)).
double l2_inner(const FieldCoeffs &u, const FieldCoeffs &v);
double h1_norm(const FieldCoeffs &u, const DiscEigenbasis &basis);
double l2_norm(const FieldCoeffs &u);

}  // namespace nlsgibbs
