#include "nlsgibbs/disc_spectrum.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

RadialQuadrature radial_quadrature(std::size_t points, double radius) {
    if (points == 0) {
        throw DomainError("radial_quadrature: need at least one node");
    }
    if (!(radius > 0.0)) {
        throw DomainError("radial_quadrature: radius must be positive");
    }
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(points), &gsl_integration_glfixed_table_free);
    if (!table) {
        throw InternalError("radial_quadrature: Gauss-Legendre table allocation failed");
    }
    RadialQuadrature q;
    q.radius = radius;
    q.nodes.resize(points);
    q.weights.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        double x = 0.0;
        double w = 0.0;
        gsl_integration_glfixed_point(0.0, radius, i, &x, &w, table.get());
        q.nodes[i] = x;
        q.weights[i] = 2.0 * std::numbers::pi * x * w;
    }
    // GSL returns nodes symmetric about the midpoint, not sorted.
    std::vector<std::size_t> order(points);
    for (std::size_t i = 0; i < points; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q.nodes[a] < q.nodes[b]; });
    RadialQuadrature sorted;
    sorted.radius = radius;
    for (std::size_t i : order) {
        sorted.nodes.push_back(q.nodes[i]);
        sorted.weights.push_back(q.weights[i]);
    }
    return sorted;
}

double integrate(const RadialQuadrature &quad, const std::vector<double> &f) {
    if (f.size() != quad.size()) {
        throw ShapeError("integrate: expected " + std::to_string(quad.size()) + " values, got " +
                         std::to_string(f.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += quad.weights[i] * f[i];
    }
    return s;
}

double integrate(const RadialQuadrature &quad, const Eigen::Ref<const Eigen::VectorXd> &f) {
    if (static_cast<std::size_t>(f.size()) != quad.size()) {
        throw ShapeError("integrate: expected " + std::to_string(quad.size()) + " values, got " +
                         std::to_string(f.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
        s += quad.weights[i] * f[static_cast<Eigen::Index>(i)];
    }
    return s;
}

FieldCoeffs &FieldCoeffs::operator+=(const FieldCoeffs &o) {
    if (o.size() != size()) {
        throw ShapeError("FieldCoeffs: length mismatch");
    }
    coeffs += o.coeffs;
    return *this;
}

FieldCoeffs &FieldCoeffs::operator-=(const FieldCoeffs &o) {
    if (o.size() != size()) {
        throw ShapeError("FieldCoeffs: length mismatch");
    }
    coeffs -= o.coeffs;
    return *this;
}

FieldCoeffs &FieldCoeffs::operator*=(std::complex<double> s) {
    coeffs *= s;
    return *this;
}

FieldCoeffs operator+(FieldCoeffs a, const FieldCoeffs &b) { return a += b; }
FieldCoeffs operator-(FieldCoeffs a, const FieldCoeffs &b) { return a -= b; }
FieldCoeffs operator*(std::complex<double> s, FieldCoeffs a) { return a *= s; }

std::size_t DiscEigenbasis::default_quad_points(std::size_t n) {
    const double zn = std::numbers::pi * (static_cast<double>(n) - 0.25) + 0.2;
    return static_cast<std::size_t>(std::ceil(4.0 * zn / std::numbers::pi)) + 64;
}

DiscEigenbasis DiscEigenbasis::build(std::size_t n, std::size_t quad_points, double radius) {
    if (n == 0) {
        throw DomainError("build_basis: N must be positive");
    }
    return assemble(bessel::j0_zeros(n), quad_points, radius);
}

DiscEigenbasis DiscEigenbasis::assemble(bessel::BesselZeroTable zeros, std::size_t quad_points, double radius) {
    DiscEigenbasis b;
    b.zeros_ = std::move(zeros);
    b.quad_ = radial_quadrature(quad_points, radius);
    const auto n = static_cast<Eigen::Index>(b.zeros_.size());
    const auto q = static_cast<Eigen::Index>(quad_points);
    b.k_.resize(n);
    b.w_ = Eigen::Map<const Eigen::VectorXd>(b.quad_.weights.data(), q);
    b.values_.resize(n, q);
    b.derivs_.resize(n, q);
    b.norms_.resize(b.zeros_.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = b.zeros_[static_cast<std::size_t>(i)] / radius;
        b.k_[i] = k;
        for (Eigen::Index j = 0; j < q; ++j) {
            const double x = k * b.quad_.nodes[static_cast<std::size_t>(j)];
            b.values_(i, j) = bessel::j0(x);
            b.derivs_(i, j) = -k * bessel::j1(x);
        }
        const double norm = std::sqrt(std::numbers::pi) * radius * std::fabs(bessel::j1(b.zeros_[static_cast<std::size_t>(i)]));
        b.norms_[static_cast<std::size_t>(i)] = norm;
        b.values_.row(i) /= norm;
        b.derivs_.row(i) /= norm;
    }
    // Self-test on the most oscillatory modes: they are the first to lose orthogonality.
    const Eigen::Index top = std::min<Eigen::Index>(n, 8);
    const Eigen::MatrixXd block = b.values_.bottomRows(top);
    const Eigen::MatrixXd g = block * b.w_.asDiagonal() * block.transpose();
    const double off = (g - Eigen::MatrixXd::Identity(top, top)).cwiseAbs().maxCoeff();
    if (off > 1e-6) {
        std::ostringstream msg;
        msg << "build_basis: " << quad_points << " quadrature nodes do not resolve mode " << n
            << " (orthonormality residual " << off << ")";
        throw ResolutionError(msg.str());
    }
    return b;
}

double DiscEigenbasis::eval(std::size_t n, double r) const {
    if (r < 0.0) {
        throw DomainError("eval: negative radius");
    }
    return bessel::j0(k_[static_cast<Eigen::Index>(n)] * r) / norms_[n];
}

double DiscEigenbasis::eval_derivative(std::size_t n, double r) const {
    if (r < 0.0) {
        throw DomainError("eval_derivative: negative radius");
    }
    const double k = k_[static_cast<Eigen::Index>(n)];
    return -k * bessel::j1(k * r) / norms_[n];
}

namespace {

void check_length(const FieldCoeffs &u, const DiscEigenbasis &b, const char *fn) {
    if (u.size() > b.size()) {
        throw ShapeError(std::string(fn) + ": field has " + std::to_string(u.size()) + " modes, basis only " +
                         std::to_string(b.size()));
    }
}

Eigen::VectorXcd synth(const Eigen::MatrixXd &table, const FieldCoeffs &u) {
    const auto m = static_cast<Eigen::Index>(u.size());
    const auto top = table.topRows(m);
    Eigen::VectorXcd out(table.cols());
    out.real() = top.transpose() * u.coeffs.real();
    out.imag() = top.transpose() * u.coeffs.imag();
    return out;
}

}  // namespace

Eigen::VectorXcd DiscEigenbasis::synthesize(const FieldCoeffs &u) const {
    check_length(u, *this, "synthesize");
    return synth(values_, u);
}

Eigen::VectorXcd DiscEigenbasis::synthesize_derivative(const FieldCoeffs &u) const {
    check_length(u, *this, "synthesize_derivative");
    return synth(derivs_, u);
}

std::complex<double> DiscEigenbasis::eval_field(const FieldCoeffs &u, double r) const {
    check_length(u, *this, "eval_field");
    std::complex<double> s = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
        s += u[n] * eval(n, r);
    }
    return s;
}

FieldCoeffs DiscEigenbasis::project(const Eigen::VectorXcd &grid_values, std::size_t m) const {
    if (static_cast<std::size_t>(grid_values.size()) != quad_.size()) {
        throw ShapeError("project: grid length mismatch");
    }
    if (m == 0 || m > size()) {
        m = size();
    }
    const auto top = values_.topRows(static_cast<Eigen::Index>(m));
    FieldCoeffs out(m);
    out.coeffs.real() = top * grid_values.real().cwiseProduct(w_);
    out.coeffs.imag() = top * grid_values.imag().cwiseProduct(w_);
    return out;
}

FieldCoeffs DiscEigenbasis::project(const Eigen::VectorXd &grid_values, std::size_t m) const {
    if (static_cast<std::size_t>(grid_values.size()) != quad_.size()) {
        throw ShapeError("project: grid length mismatch");
    }
    if (m == 0 || m > size()) {
        m = size();
    }
    FieldCoeffs out(m);
    out.coeffs.real() = values_.topRows(static_cast<Eigen::Index>(m)) * grid_values.cwiseProduct(w_);
    return out;
}

Eigen::MatrixXd DiscEigenbasis::gram(std::size_t m) const {
    m = std::min(m, size());
    const auto top = values_.topRows(static_cast<Eigen::Index>(m));
    return top * w_.asDiagonal() * top.transpose();
}

void DiscEigenbasis::write_csv(std::ostream &os) const {
    os << "n,z_n,norm\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < size(); ++i) {
        os << (i + 1) << ',' << zeros_[i] << ',' << norms_[i] << '\n';
    }
}

DiscEigenbasis DiscEigenbasis::read_csv(std::istream &is, std::size_t quad_points, double radius) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ShapeError("read_csv: empty basis file");
    }
    bessel::BesselZeroTable zeros;
    std::vector<double> norms;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string a;
        std::string z;
        std::string nrm;
        if (!std::getline(row, a, ',') || !std::getline(row, z, ',') || !std::getline(row, nrm, ',')) {
            throw ShapeError("read_csv: malformed row '" + line + "'");
        }
        zeros.zeros.push_back(std::stod(z));
        norms.push_back(std::stod(nrm));
    }
    zeros.count = zeros.zeros.size();
    if (zeros.count == 0) {
        throw ShapeError("read_csv: no modes");
    }
    if (quad_points == 0) {
        quad_points = default_quad_points(zeros.count);
    }
    DiscEigenbasis b = assemble(std::move(zeros), quad_points, radius);
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (std::fabs(b.norms_[i] - norms[i]) > 1e-8 * norms[i]) {
            throw ResolutionError("read_csv: stored norm of mode " + std::to_string(i + 1) +
                                  " disagrees with the rebuilt quadrature");
        }
    }
    return b;
}

FieldCoeffs project_low(const FieldCoeffs &u, std::size_t m) {
    if (m > u.size()) {
        throw ShapeError("project_low: M exceeds field length");
    }
    FieldCoeffs out = u;
    out.coeffs.tail(static_cast<Eigen::Index>(u.size() - m)).setZero();
    return out;
}

double h1_inner(const FieldCoeffs &u, const FieldCoeffs &v, const DiscEigenbasis &basis) {
    if (u.size() != v.size()) {
        throw ShapeError("h1_inner: length mismatch");
    }
    check_length(u, basis, "h1_inner");
    double s = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
        s += basis.eigenvalue(n) * (u[n] * std::conj(v[n])).real();
    }
    return s;
}

double l2_inner(const FieldCoeffs &u, const FieldCoeffs &v) {
    if (u.size() != v.size()) {
        throw ShapeError("l2_inner: length mismatch");
    }
    return (u.coeffs.dot(v.coeffs)).real();
}

double h1_norm(const FieldCoeffs &u, const DiscEigenbasis &basis) { return std::sqrt(h1_inner(u, u, basis)); }
double l2_norm(const FieldCoeffs &u) { return u.coeffs.norm(); }

}  // namespace nlsgibbs
