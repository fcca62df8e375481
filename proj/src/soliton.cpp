#include "nlsgibbs/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

namespace {

const std::complex<double> kI(0.0, 1.0);

double window_lower(const SolitonWindow &w, std::size_t n) {
    return std::max(w.lower_factor / static_cast<double>(n), w.delta_floor);
}

}  // namespace

double canonical_angle(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) {
        t += two_pi;
    }
    return t >= two_pi ? 0.0 : t;
}

nlohmann::json to_json(const SolitonDecomposition &d) {
    nlohmann::json j;
    j["theta"] = d.coords.theta;
    j["delta"] = d.coords.delta;
    j["residual_l2"] = d.residual_l2;
    j["orth_residuals"] = {d.orth_residuals[0], d.orth_residuals[1]};
    j["iterations"] = d.iterations;
    j["contraction"] = d.contraction;
    j["v_norm_l2"] = l2_norm(d.v);
    return j;
}

SolitonManifold::SolitonManifold(const GroundStateProfile &gs, const DiscEigenbasis &basis, SolitonWindow window)
    : gs_(&gs), basis_(&basis), window_(window) {}

double SolitonManifold::delta_lower() const { return window_lower(window_, basis_->size()); }

double SolitonManifold::eps() const { return window_.eps_fraction * gs_->l2_norm(); }

void SolitonManifold::check_window(double delta) const {
    if (!(delta >= delta_lower() && delta <= delta_upper())) {
        std::ostringstream msg;
        msg << "soliton: delta=" << delta << " outside the window [" << delta_lower() << ", " << delta_upper()
            << "]";
        throw WindowError(msg.str());
    }
}

FieldCoeffs SolitonManifold::point(double theta, double delta) const {
    return std::polar(1.0, theta) * restricted_soliton(*gs_, delta, *basis_);
}

std::pair<FieldCoeffs, FieldCoeffs> SolitonManifold::tangents(double theta, double delta) const {
    const std::complex<double> phase = std::polar(1.0, theta);
    return {kI * phase * restricted_soliton(*gs_, delta, *basis_), phase * d_delta_soliton(*gs_, delta, *basis_)};
}

SolitonManifold::Frame SolitonManifold::frame(double theta, double delta) const {
    auto [t1, t2] = tangents(theta, delta);
    const double n1 = h1_inner(t1, t1, *basis_);
    const double n2 = h1_inner(t2, t2, *basis_);
    return {std::move(t1), std::move(t2), n1, n2};
}

FieldCoeffs SolitonManifold::project_with(const FieldCoeffs &u, const Frame &f) const {
    FieldCoeffs out = u;
    out -= (h1_inner(u, f.t1, *basis_) / f.n1) * f.t1;
    out -= (h1_inner(u, f.t2, *basis_) / f.n2) * f.t2;
    return out;
}

FieldCoeffs SolitonManifold::normal_project(const FieldCoeffs &u, const SolitonCoords &c) const {
    if (u.size() != basis_->size()) {
        throw ShapeError("normal_project: field length must match the basis");
    }
    return project_with(u, frame(c.theta, c.delta));
}

FieldCoeffs SolitonManifold::chart(double theta, double delta, const FieldCoeffs &w) const {
    return point(theta, delta) + project_with(w, frame(theta, delta));
}

namespace {

// Coordinates of the chord iteration: phase offset, dilation ratio, normal component at the base.
struct ChartVec {
    double a;
    double b;
    FieldCoeffs w;
};

double chart_norm(const ChartVec &x) { return std::fabs(x.a) + std::fabs(x.b) + l2_norm(x.w); }

}  // namespace

SolitonDecomposition SolitonManifold::decompose(const FieldCoeffs &u, const SolitonCoords &initial,
                                                int max_iterations) const {
    if (u.size() != basis_->size()) {
        throw ShapeError("decompose: field length must match the basis");
    }
    check_window(initial.delta);
    const double theta0 = initial.theta;
    const double delta0 = initial.delta;
    const FieldCoeffs base = point(theta0, delta0);
    const double dist = l2_norm(u - base);
    if (dist > 2.0 * eps()) {
        std::ostringstream msg;
        msg << "decompose: ||u - e^{i theta} Q_delta||_2 = " << dist << " exceeds 2 eps = " << 2.0 * eps();
        throw NotInNeighborhood(msg.str());
    }
    const Frame f0 = frame(theta0, delta0);
    // A = dG(0, 1, 0) maps (a, b, w) to a t1 + b delta0 t2 + w, with w in V at the base point.
    auto apply_inverse = [&](const FieldCoeffs &y) {
        return ChartVec{h1_inner(y, f0.t1, *basis_) / f0.n1, h1_inner(y, f0.t2, *basis_) / (f0.n2 * delta0),
                        project_with(y, f0)};
    };

    ChartVec x{0.0, 1.0, FieldCoeffs(u.size())};
    double prev = 0.0;
    double kappa = 0.0;
    int it = 0;
    for (;; ++it) {
        if (it >= max_iterations) {
            throw ConvergenceError("decompose: no convergence in " + std::to_string(max_iterations) + " iterations");
        }
        const double delta = delta0 * x.b;
        if (!(delta > 0.0)) {
            throw NotInNeighborhood("decompose: iteration left delta > 0");
        }
        const FieldCoeffs g = chart(theta0 + x.a, delta, x.w);
        const ChartVec step = apply_inverse(u - g);
        x.a += step.a;
        x.b += step.b;
        x.w += step.w;
        const double size = chart_norm(step);
        if (it > 0 && prev > 1e-11) {
            kappa = std::max(kappa, size / prev);
            if (kappa > 0.5) {
                std::ostringstream msg;
                msg << "decompose: contraction estimate " << kappa << " exceeds 1/2";
                throw NotInNeighborhood(msg.str());
            }
        }
        if (size <= 1e-13 * (1.0 + chart_norm(x))) {
            break;
        }
        prev = size;
    }

    SolitonDecomposition d;
    d.coords.theta = canonical_angle(theta0 + x.a);
    d.coords.delta = delta0 * x.b;
    d.iterations = it + 1;
    d.contraction = kappa;
    const Frame f = frame(d.coords.theta, d.coords.delta);
    d.v = project_with(x.w, f);
    d.residual_l2 = l2_norm(u - point(d.coords.theta, d.coords.delta) - d.v);
    d.orth_residuals = {h1_inner(d.v, f.t1, *basis_), h1_inner(d.v, f.t2, *basis_)};
    check_window(d.coords.delta);
    return d;
}

double SolitonManifold::chord_deviation(const SolitonCoords &base, double theta, double delta_ratio,
                                        const FieldCoeffs &w, const std::vector<FieldCoeffs> &probes) const {
    const Frame f0 = frame(base.theta, base.delta);
    auto inverse = [&](const FieldCoeffs &y) {
        return ChartVec{h1_inner(y, f0.t1, *basis_) / f0.n1, h1_inner(y, f0.t2, *basis_) / (f0.n2 * base.delta),
                        project_with(y, f0)};
    };
    auto G = [&](double a, double b, const FieldCoeffs &ww) {
        return chart(base.theta + a, base.delta * b, ww);
    };
    const double h = 1e-5;
    double worst = 0.0;
    auto probe = [&](const ChartVec &e) {
        FieldCoeffs wp = w;
        wp += h * e.w;
        FieldCoeffs wm = w;
        wm -= h * e.w;
        const FieldCoeffs dg =
            (1.0 / (2.0 * h)) * (G(theta + h * e.a, delta_ratio + h * e.b, wp) - G(theta - h * e.a, delta_ratio - h * e.b, wm));
        ChartVec y = inverse(dg);
        y.a -= e.a;
        y.b -= e.b;
        y.w -= e.w;
        worst = std::max(worst, chart_norm(y) / chart_norm(e));
    };
    const FieldCoeffs zero(w.size());
    probe({1.0, 0.0, zero});
    probe({0.0, 1.0, zero});
    for (const auto &p : probes) {
        FieldCoeffs pw = project_with(p, f0);
        pw *= 1.0 / l2_norm(pw);
        probe({0.0, 0.0, pw});
    }
    return worst;
}

std::pair<FieldCoeffs, FieldCoeffs> tangent_frame(const GroundStateProfile &gs, double delta,
                                                  const DiscEigenbasis &basis, std::size_t N) {
    if (N == 0 || N > basis.size()) {
        throw ShapeError("tangent_frame: N must lie in [1, basis size]");
    }
    const double lower = window_lower(SolitonWindow{}, N);
    if (delta < lower) {
        std::ostringstream msg;
        msg << "tangent_frame: delta=" << delta << " below the window edge " << lower << " for N=" << N;
        throw WindowError(msg.str());
    }
    return {kI * restricted_soliton(gs, delta, basis, N), d_delta_soliton(gs, delta, basis, N)};
}

double hamiltonian(const FieldCoeffs &u, const DiscEigenbasis &basis) {
    const Eigen::VectorXd a2 = basis.synthesize(u).cwiseAbs2();
    return 0.5 * h1_inner(u, u, basis) - 0.25 * integrate(basis.quad(), a2.cwiseProduct(a2));
}

double quadratic_form_B(const FieldCoeffs &v, double delta, double eta, const GroundStateProfile &gs,
                        const DiscEigenbasis &basis) {
    if (!(eta >= 0.0)) {
        throw DomainError("quadratic_form_B: eta must be nonnegative");
    }
    const FieldCoeffs q = restricted_soliton(gs, delta, basis, v.size());
    const Eigen::VectorXd qg = basis.synthesize(q).real();
    const Eigen::VectorXcd vg = basis.synthesize(v);
    const Eigen::VectorXd v2re = (vg.array() * vg.array()).real().matrix();
    const Eigen::VectorXd term = qg.cwiseAbs2().cwiseProduct(0.5 * v2re + (1.0 + eta) * vg.cwiseAbs2());
    return l2_inner(q, v) / (delta * delta) + integrate(basis.quad(), term);
}

HamiltonianExpansion hamiltonian_expansion(const FieldCoeffs &q, const FieldCoeffs &v, double delta,
                                           const DiscEigenbasis &basis) {
    if (q.size() != v.size()) {
        throw ShapeError("hamiltonian_expansion: length mismatch");
    }
    const Eigen::VectorXd qg = basis.synthesize(q).real();
    const Eigen::VectorXcd vg = basis.synthesize(v);
    const Eigen::VectorXd vre = vg.real();
    const Eigen::VectorXd v2 = vg.cwiseAbs2();
    const Eigen::VectorXd v2re = (vg.array() * vg.array()).real().matrix();
    const Eigen::VectorXd q2 = qg.cwiseAbs2();
    const auto &quad = basis.quad();
    HamiltonianExpansion e;
    e.base = hamiltonian(q, basis);
    e.perturbed = hamiltonian(q + v, basis);
    e.linear = h1_inner(q, v, basis) - integrate(quad, q2.cwiseProduct(qg).cwiseProduct(vre));
    e.gradient = 0.5 * h1_inner(v, v, basis);
    e.quadratic = -integrate(quad, q2.cwiseProduct(0.5 * v2re + v2));
    e.cubic = -integrate(quad, qg.cwiseProduct(v2).cwiseProduct(vre));
    e.quartic = -0.25 * integrate(quad, v2.cwiseProduct(v2));
    e.linear_residual = e.linear + l2_inner(q, v) / (delta * delta);
    return e;
}

std::array<double, 2> surface_measure_factors(double delta) {
    if (!(delta > 0.0)) {
        throw DomainError("surface_measure_factors: delta must be positive");
    }
    return {std::pow(delta, -3.0), std::pow(delta, -5.0)};
}

}  // namespace nlsgibbs
