#include "nlsgibbs/linops.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nlsgibbs/bessel.hpp"
#include "nlsgibbs/error.hpp"
#include "nlsgibbs/kernels.hpp"
#include "nlsgibbs/rng.hpp"

namespace nlsgibbs {

std::string to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::A1:
        return "A1";
    case OperatorKind::A2:
        return "A2";
    case OperatorKind::S_plus:
        return "S_plus";
    case OperatorKind::S_minus:
        return "S_minus";
    case OperatorKind::T_R:
        return "T_R";
    case OperatorKind::T_I:
        return "T_I";
    }
    return "?";
}

OperatorKind parse_operator(const std::string &name) {
    for (OperatorKind k : {OperatorKind::A1, OperatorKind::A2, OperatorKind::S_plus, OperatorKind::S_minus,
                           OperatorKind::T_R, OperatorKind::T_I}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw DomainError("unknown operator '" + name + "' (expected A1, A2, S_plus, S_minus, T_R or T_I)");
}

namespace {

Eigen::VectorXd soliton_on_grid(const GroundStateProfile &gs, double delta, const DiscEigenbasis &basis) {
    const auto &nodes = basis.quad().nodes;
    const double edge = soliton_scaled(gs, delta, basis.radius());
    Eigen::VectorXd q(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        q[static_cast<Eigen::Index>(i)] = soliton_scaled(gs, delta, nodes[i]) - edge;
    }
    return q;
}

// int V e_m^2 for the last mode on the basis grid and on a rule with twice the nodes.
void resolution_check(const DiscEigenbasis &basis, const std::function<double(double)> &potential,
                      const Eigen::VectorXd &on_grid, std::size_t dim) {
    const auto m = static_cast<Eigen::Index>(dim - 1);
    const double coarse = (basis.values().row(m).array().square() * basis.weights().transpose().array() *
                           on_grid.transpose().array())
                              .sum();
    const RadialQuadrature fine = radial_quadrature(2 * basis.quad().size(), basis.radius());
    double refined = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const double e = basis.eval(static_cast<std::size_t>(m), fine.nodes[i]);
        refined += fine.weights[i] * potential(fine.nodes[i]) * e * e;
    }
    const double scale = std::max(std::fabs(refined), on_grid.cwiseAbs().maxCoeff() * 1e-3);
    if (std::fabs(coarse - refined) > 1e-6 * scale) {
        std::ostringstream msg;
        msg << "build_constrained_operator: potential under-resolved on the quadrature grid (entry " << dim << ","
            << dim << " differs by " << std::fabs(coarse - refined) / scale << " relative)";
        throw ResolutionError(msg.str());
    }
}

Eigen::MatrixXd orthonormalize(const std::vector<Eigen::VectorXd> &vs) {
    Eigen::MatrixXd out(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
    Eigen::Index cols = 0;
    for (const auto &v : vs) {
        Eigen::VectorXd u = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                u -= out.col(j).dot(u) * out.col(j);
            }
        }
        const double n = u.norm();
        if (n < 1e-14 * v.norm() || n == 0.0) {
            continue;
        }
        out.col(cols++) = u / n;
    }
    return out.leftCols(cols);
}

}  // namespace

GalerkinOperator build_constrained_operator(OperatorKind which, double delta, double eta, const GroundStateProfile &gs,
                                            const DiscEigenbasis &basis, std::size_t dim,
                                            const OperatorOptions &opts) {
    if (dim == 0 || dim > basis.size()) {
        throw ShapeError("build_constrained_operator: dim must lie in [1, basis size]");
    }
    if (!(delta > 0.0)) {
        throw DomainError("build_constrained_operator: delta must be positive");
    }
    if (!(eta >= 0.0)) {
        throw DomainError("build_constrained_operator: eta must be nonnegative");
    }
    GalerkinOperator op;
    op.which = which;
    op.delta = delta;
    op.eta = eta;
    op.dim = dim;
    const double d2 = 1.0 / (delta * delta);
    const double a = opts.a > 0.0 ? opts.a : profile_radius(gs, 0.25);
    const double edge = soliton_scaled(gs, delta, basis.radius());
    const Eigen::VectorXd q = soliton_on_grid(gs, delta, basis);
    const Eigen::VectorXd q2 = q.cwiseAbs2();
    const auto &nodes = basis.quad().nodes;
    const auto nq = static_cast<Eigen::Index>(nodes.size());
    Eigen::VectorXd v(nq);
    std::function<double(double)> vfun;
    auto qfun = [&gs, delta, edge](double r) { return soliton_scaled(gs, delta, r) - edge; };
    bool h1 = true;
    double diag_shift = 0.0;
    switch (which) {
    case OperatorKind::A1:
    case OperatorKind::A2: {
        const double c = (1.0 + 5.0 * eta) * (which == OperatorKind::A1 ? 1.5 : 0.5);
        v = (-c * q2).array() + 0.5 * d2;
        vfun = [c, d2, qfun](double r) {
            const double x = qfun(r);
            return -c * x * x + 0.5 * d2;
        };
        break;
    }
    case OperatorKind::S_plus:
    case OperatorKind::S_minus: {
        const double rin = a * delta;
        if (!(rin < basis.radius())) {
            throw DomainError("build_constrained_operator: a delta must be below the disc radius");
        }
        const bool plus = which == OperatorKind::S_plus;
        const double inside = plus ? -opts.penalty * d2 : -opts.well_depth * d2;
        const double outside = plus ? 0.25 * d2 : opts.penalty * d2;
        vfun = [rin, inside, outside](double r) { return r < rin ? inside : outside; };
        for (Eigen::Index i = 0; i < nq; ++i) {
            v[i] = vfun(nodes[static_cast<std::size_t>(i)]);
        }
        break;
    }
    case OperatorKind::T_R:
    case OperatorKind::T_I: {
        const double c = which == OperatorKind::T_R ? 1.5 : 0.5;
        v = -c * q2;
        vfun = [c, qfun](double r) {
            const double x = qfun(r);
            return -c * x * x;
        };
        h1 = false;
        diag_shift = 0.5 * d2;
        break;
    }
    }
    if (which != OperatorKind::S_plus && which != OperatorKind::S_minus) {
        resolution_check(basis, vfun, v, dim);
    }
    op.matrix = opts.parallel ? kernels::galerkin_parallel(basis, v, dim, h1) : kernels::galerkin_serial(basis, v, dim, h1);
    if (!h1) {
        for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(dim); ++n) {
            op.matrix(n, n) += 0.5 * basis.eigenvalue(static_cast<std::size_t>(n)) + diag_shift;
        }
    }

    std::vector<Eigen::VectorXd> cons;
    const auto d = static_cast<Eigen::Index>(dim);
    if (which == OperatorKind::A1 || which == OperatorKind::A2) {
        const Eigen::VectorXd qc = restricted_soliton(gs, delta, basis, dim).coeffs.real();
        const Eigen::VectorXd k = basis.wavenumbers().head(d);
        if (which == OperatorKind::A1) {
            const Eigen::VectorXd dq = d_delta_soliton(gs, delta, basis, dim).coeffs.real();
            cons.emplace_back(k.cwiseProduct(dq));
            cons.emplace_back(qc.cwiseQuotient(k));
        } else {
            cons.emplace_back(k.cwiseProduct(qc));
        }
    }
    if (!cons.empty()) {
        op.constraints = orthonormalize(cons);
        const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d) - op.constraints * op.constraints.transpose();
        op.matrix = p * op.matrix * p;
        op.matrix = 0.5 * (op.matrix + op.matrix.transpose()).eval();
    } else {
        op.constraints.resize(d, 0);
    }
    return op;
}

std::vector<double> Spectrum::positive(double tail_tol) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0 && (tail_tol <= 0.0 || tail_weight[i] < tail_tol)) {
            out.push_back(values[i]);
        }
    }
    return out;
}

std::vector<double> Spectrum::negative(double tail_tol) const {
    std::vector<double> out;
    for (std::size_t i = values.size(); i-- > 0;) {
        if (values[i] < 0.0 && (tail_tol <= 0.0 || tail_weight[i] < tail_tol)) {
            out.push_back(values[i]);
        }
    }
    return out;
}

double Spectrum::min() const {
    if (values.empty()) {
        throw NumericalError("spectrum: no eigenvalues outside the constrained cluster");
    }
    return values.back();
}

Spectrum eigenvalues(const GalerkinOperator &op, double cluster_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalues: symmetric eigensolver failed");
    }
    Spectrum s;
    const Eigen::VectorXd &ev = solver.eigenvalues();
    const Eigen::Index n = ev.size();
    const Eigen::Index tail = n - (3 * n) / 4;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (std::fabs(ev[i]) < cluster_tol) {
            ++s.cluster;
        } else {
            s.values.push_back(ev[i]);
            s.tail_weight.push_back(solver.eigenvectors().col(i).tail(tail).squaredNorm());
        }
    }
    return s;
}

std::vector<double> comparison_spectrum(OperatorKind which, double delta, double a, std::size_t n, double well_depth) {
    const double alpha = a * delta;
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("comparison_spectrum: need 0 < a delta < 1");
    }
    const double d2 = 1.0 / (delta * delta);
    std::vector<double> out;
    out.reserve(n);
    if (which == OperatorKind::S_plus) {
        for (double b : bessel::cross_product_zeros(alpha, n)) {
            out.push_back(d2 / (4.0 * b * b));
        }
    } else if (which == OperatorKind::S_minus) {
        const bessel::BesselZeroTable z = bessel::j0_zeros(n);
        for (double zk : z.zeros) {
            const double A = zk / alpha;
            out.push_back(-well_depth * d2 / (A * A));
        }
    } else {
        throw DomainError("comparison_spectrum: only S_plus and S_minus have closed forms");
    }
    return out;
}

GaussianProduct gaussian_product(const std::vector<double> &eigs, double eta) {
    double acc = 0.0;
    for (double lam : eigs) {
        const double factor = 1.0 + 2.0 * (1.0 - eta) * lam;
        if (!(factor > 0.0)) {
            std::ostringstream msg;
            msg << "gaussian_product: eigenvalue " << lam << " is at or below the barrier -1/(2(1-eta))";
            throw DivergenceError(msg.str());
        }
        acc += std::log(factor);
    }
    GaussianProduct g;
    g.log_product = -0.5 * acc;
    g.product = std::exp(g.log_product);
    return g;
}

double gaussian_factor(double lambda, double eta) {
    return std::exp(gaussian_product({lambda}, eta).log_product);
}

MeanEstimate gaussian_factor_mc(double lambda, double eta, std::size_t samples, std::uint64_t seed) {
    gaussian_factor(lambda, eta);
    std::vector<double> values(samples);
    const double c = (1.0 - eta) * lambda;
#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < samples; ++s) {
        const double g = std::sqrt(2.0) * rng::complex_gaussian(seed, 0, s, 0).real();
        values[s] = std::exp(-c * g * g);
    }
    return mean_and_stderr(values);
}

double second_derivative_margin(const FieldCoeffs &w, double delta, const GroundStateProfile &gs,
                                const DiscEigenbasis &basis) {
    const FieldCoeffs q = restricted_soliton(gs, delta, basis, w.size());
    const Eigen::VectorXd qc = q.coeffs.real();
    Eigen::VectorXd wr = w.coeffs.real();
    const Eigen::VectorXd wi = w.coeffs.imag();
    wr -= (wr.dot(qc) / qc.dot(qc)) * qc;
    FieldCoeffs ww(w.size());
    ww.coeffs.real() = wr;
    ww.coeffs.imag() = wi;
    const Eigen::VectorXd qg = basis.synthesize(q).real();
    const Eigen::VectorXcd wg = basis.synthesize(ww);
    const Eigen::VectorXd w2re = (wg.array() * wg.array()).real().matrix();
    const double potential =
        integrate(basis.quad(), qg.cwiseAbs2().cwiseProduct(0.5 * w2re + wg.cwiseAbs2()));
    return 0.5 * h1_inner(ww, ww, basis) - potential + 0.5 / (delta * delta) * l2_inner(ww, ww);
}

void write_spectrum_csv(std::ostream &os, const GalerkinOperator &op, const Spectrum &s, bool header) {
    if (header) {
        os << "which,delta,eta,dim,k,lambda_k\n";
    }
    os << std::setprecision(17);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        os << to_string(op.which) << ',' << op.delta << ',' << op.eta << ',' << op.dim << ',' << (k + 1) << ','
           << s.values[k] << '\n';
    }
}

}  // namespace nlsgibbs
