#include "nlsgibbs/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

namespace {

using ld = long double;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Rhs {
    double p;
    ld k2;
    int int_power;  // p - 1 when p is an integer, else -1

    explicit Rhs(double p_) : p(p_), k2(2.0L / (static_cast<ld>(p_) - 2.0L)), int_power(-1) {
        if (std::floor(p_) == p_) {
            int_power = static_cast<int>(p_) - 1;
        }
    }

    [[nodiscard]] ld power(ld q) const {
        if (int_power >= 0) {
            ld out = 1.0L;
            for (int i = 0; i < int_power; ++i) {
                out *= q;
            }
            return out;
        }
        return q >= 0 ? std::pow(q, static_cast<ld>(p) - 1.0L) : -std::pow(-q, static_cast<ld>(p) - 1.0L);
    }

    // Q'' = -Q'/r + k^2 (Q - Q^{p-1})
    [[nodiscard]] ld accel(ld r, ld q, ld qp) const { return -qp / r + k2 * (q - power(q)); }
};

void rk4_step(const Rhs &f, ld r, ld h, ld &q, ld &qp) {
    const ld k1q = qp;
    const ld k1p = f.accel(r, q, qp);
    const ld k2q = qp + 0.5L * h * k1p;
    const ld k2p = f.accel(r + 0.5L * h, q + 0.5L * h * k1q, k2q);
    const ld k3q = qp + 0.5L * h * k2p;
    const ld k3p = f.accel(r + 0.5L * h, q + 0.5L * h * k2q, k3q);
    const ld k4q = qp + h * k3p;
    const ld k4p = f.accel(r + h, q + h * k3q, k4q);
    q += h / 6.0L * (k1q + 2.0L * k2q + 2.0L * k3q + k4q);
    qp += h / 6.0L * (k1p + 2.0L * k2p + 2.0L * k3p + k4p);
}

enum class Outcome { Crosses, TurnsUp };

struct Trajectory {
    std::vector<ld> q;
    std::vector<ld> qp;
};

// Integrates from r_start with the regular Taylor start, landing on the grid r_i = i h.
// Q < 0 means beta overshoots the ground state; Q' > 0 (or reaching r_cap) means it undershoots.
Outcome shoot(ld beta, const Rhs &f, const ShootingOptions &opts, Trajectory *record) {
    const ld h = opts.step;
    const ld r0 = opts.r_start;
    const ld c = (beta - f.power(beta)) / (2.0L * (static_cast<ld>(f.p) - 2.0L));
    ld q = beta + c * r0 * r0;
    ld qp = 2.0L * c * r0;
    if (record != nullptr) {
        record->q.assign(1, beta);
        record->qp.assign(1, 0.0L);
    }
    rk4_step(f, r0, h - r0, q, qp);
    const auto cap = static_cast<std::size_t>(std::ceil(opts.r_cap / opts.step));
    for (std::size_t i = 1;; ++i) {
        if (!std::isfinite(static_cast<double>(q)) || !std::isfinite(static_cast<double>(qp)) ||
            std::fabs(q) > 1e6L) {
            throw StepSizeError("solve_ground_state: integration blew up at r=" +
                                std::to_string(static_cast<double>(i) * opts.step) +
                                " (reduce the step)");
        }
        if (record != nullptr) {
            record->q.push_back(q);
            record->qp.push_back(qp);
        }
        if (q < 0.0L) {
            return Outcome::Crosses;
        }
        if (qp > 0.0L || i >= cap) {
            return Outcome::TurnsUp;
        }
        rk4_step(f, static_cast<ld>(i) * h, h, q, qp);
    }
}

// Index of the first node where the under- and overshooting trajectories have both
// dropped to the splice level while agreeing to 1e-6 relative up to there.
std::optional<std::size_t> agreement_index(const Trajectory &lo, const Trajectory &hi, double level) {
    const std::size_t n = std::min(lo.q.size(), hi.q.size());
    for (std::size_t i = 0; i < n; ++i) {
        const ld a = lo.q[i];
        const ld b = hi.q[i];
        if (std::fabs(a - b) > 1e-6L * std::fabs(a)) {
            return std::nullopt;
        }
        if (a <= level && b <= level) {
            return i;
        }
    }
    return std::nullopt;
}

double trapezoid_2d(const std::vector<double> &r, const std::vector<double> &f) {
    double s = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        s += 0.5 * (r[i] - r[i - 1]) * (f[i] * r[i] + f[i - 1] * r[i - 1]);
    }
    return kTwoPi * s;
}

double tail_mass(double amplitude, double k, double r) {
    // int_r^inf A^2 K0(k s)^2 2 pi s ds with K0(x)^2 ~ pi/(2x) e^{-2x}.
    return kTwoPi * amplitude * amplitude * std::numbers::pi / (2.0 * k) * std::exp(-2.0 * k * r) / (2.0 * k);
}

void finish_metadata(GroundStateProfile &gs) {
    std::vector<double> q2(gs.Q.size());
    for (std::size_t i = 0; i < q2.size(); ++i) {
        q2[i] = gs.Q[i] * gs.Q[i];
    }
    gs.mass = trapezoid_2d(gs.r_grid, q2) + tail_mass(gs.tail_amplitude, gs.decay_rate, gs.r_max());
    gs.center_value = gs.Q.front();
}

}  // namespace

GroundStateProfile solve_ground_state(double p, double tol, const ShootingOptions &opts) {
    if (!(p > 2.0 && p <= 8.0)) {
        throw DomainError("solve_ground_state: p must lie in (2, 8]");
    }
    if (!(tol >= 1e-12 && tol <= 1e-4)) {
        throw DomainError("solve_ground_state: tol must lie in [1e-12, 1e-4]");
    }
    if (!(opts.step > 0.0 && opts.r_start > 0.0 && opts.r_start < opts.step)) {
        throw DomainError("solve_ground_state: need 0 < r_start < step");
    }
    const Rhs f(p);
    ld lo = 1.0L;
    ld hi = 10.0L;
    if (shoot(lo, f, opts, nullptr) != Outcome::TurnsUp || shoot(hi, f, opts, nullptr) != Outcome::Crosses) {
        throw SolverError("solve_ground_state: no sign-definite shooting bracket in [1, 10]");
    }
    Trajectory tlo;
    Trajectory thi;
    std::optional<std::size_t> splice;
    int until_check = 0;
    for (;;) {
        if (hi - lo <= tol && until_check <= 0) {
            shoot(lo, f, opts, &tlo);
            shoot(hi, f, opts, &thi);
            splice = agreement_index(tlo, thi, opts.splice_level);
            if (splice) {
                break;
            }
            until_check = 4;
        }
        const ld mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) {
            throw SolverError("solve_ground_state: bracket collapsed before the tail was resolved");
        }
        if (shoot(mid, f, opts, nullptr) == Outcome::Crosses) {
            hi = mid;
        } else {
            lo = mid;
        }
        --until_check;
    }

    GroundStateProfile gs;
    gs.p = p;
    gs.decay_rate = std::sqrt(2.0 / (p - 2.0));
    const double h = opts.step;
    const std::size_t js = *splice;
    for (std::size_t i = 0; i <= js; ++i) {
        gs.r_grid.push_back(static_cast<double>(i) * h);
        gs.Q.push_back(static_cast<double>(0.5L * (tlo.q[i] + thi.q[i])));
        gs.Qp.push_back(static_cast<double>(0.5L * (tlo.qp[i] + thi.qp[i])));
    }
    gs.Q.front() = static_cast<double>(0.5L * (lo + hi));
    gs.r_splice = gs.r_grid.back();
    const double k = gs.decay_rate;
    gs.tail_amplitude = gs.Q.back() / std::cyl_bessel_k(0.0, k * gs.r_splice);
    for (std::size_t i = js + 1;; ++i) {
        const double r = static_cast<double>(i) * h;
        const double q = gs.tail_amplitude * std::cyl_bessel_k(0.0, k * r);
        gs.r_grid.push_back(r);
        gs.Q.push_back(q);
        gs.Qp.push_back(-gs.tail_amplitude * k * std::cyl_bessel_k(1.0, k * r));
        if (q < opts.tail_floor) {
            break;
        }
    }
    finish_metadata(gs);
    return gs;
}

double GroundStateProfile::l2_norm() const { return std::sqrt(mass); }

namespace {

std::size_t interval(const std::vector<double> &r, double x) {
    auto it = std::upper_bound(r.begin(), r.end(), x);
    std::size_t i = static_cast<std::size_t>(it - r.begin());
    return i == 0 ? 0 : std::min(i - 1, r.size() - 2);
}

}  // namespace

double GroundStateProfile::value(double r) const {
    if (r < 0.0) {
        throw DomainError("ground state: negative radius");
    }
    if (r >= r_max()) {
        return tail_amplitude * std::cyl_bessel_k(0.0, decay_rate * r);
    }
    const std::size_t i = interval(r_grid, r);
    const double h = r_grid[i + 1] - r_grid[i];
    const double t = (r - r_grid[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * Q[i] + (t3 - 2 * t2 + t) * h * Qp[i] + (-2 * t3 + 3 * t2) * Q[i + 1] +
           (t3 - t2) * h * Qp[i + 1];
}

double GroundStateProfile::derivative(double r) const {
    if (r < 0.0) {
        throw DomainError("ground state: negative radius");
    }
    if (r >= r_max()) {
        return -tail_amplitude * decay_rate * std::cyl_bessel_k(1.0, decay_rate * r);
    }
    const std::size_t i = interval(r_grid, r);
    const double h = r_grid[i + 1] - r_grid[i];
    const double t = (r - r_grid[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * Q[i] + (-6 * t2 + 6 * t) * Q[i + 1]) / h + (3 * t2 - 4 * t + 1) * Qp[i] +
           (3 * t2 - 2 * t) * Qp[i + 1];
}

std::vector<double> energy_profile(const GroundStateProfile &gs) {
    const double p = gs.p;
    std::vector<double> e(gs.Q.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double q = gs.Q[i];
        e[i] = 0.5 * gs.Qp[i] * gs.Qp[i] + 2.0 / (p * (p - 2.0)) * std::pow(q, p) - q * q / (p - 2.0);
    }
    return e;
}

double profile_radius(const GroundStateProfile &gs, double level) {
    if (!(level > 0.0) || level >= gs.center_value) {
        throw DomainError("profile_radius: level must lie in (0, Q(0))");
    }
    auto it = std::find_if(gs.Q.begin(), gs.Q.end(), [level](double q) { return q <= level; });
    if (it == gs.Q.end()) {
        throw DomainError("profile_radius: level below the tabulated range");
    }
    std::size_t i = static_cast<std::size_t>(it - gs.Q.begin());
    double a = gs.r_grid[i - 1];
    double b = gs.r_grid[i];
    for (int iter = 0; iter < 60; ++iter) {
        const double m = 0.5 * (a + b);
        (gs.value(m) > level ? a : b) = m;
    }
    return 0.5 * (a + b);
}

void write_profile_csv(std::ostream &os, const GroundStateProfile &gs, std::size_t stride) {
    stride = std::max<std::size_t>(stride, 1);
    os << "r,Q,Qp\n" << std::setprecision(17);
    const std::size_t last = gs.r_grid.size() - 1;
    for (std::size_t i = 0; i <= last; i += stride) {
        os << gs.r_grid[i] << ',' << gs.Q[i] << ',' << gs.Qp[i] << '\n';
    }
    if (last % stride != 0) {
        os << gs.r_grid[last] << ',' << gs.Q[last] << ',' << gs.Qp[last] << '\n';
    }
}

GroundStateProfile read_profile_csv(std::istream &is, double p) {
    if (!(p > 2.0)) {
        throw DomainError("read_profile_csv: p must exceed 2");
    }
    std::string line;
    if (!std::getline(is, line)) {
        throw ShapeError("read_profile_csv: empty file");
    }
    GroundStateProfile gs;
    gs.p = p;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string a;
        std::string b;
        std::string c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',')) {
            throw ShapeError("read_profile_csv: malformed row '" + line + "'");
        }
        gs.r_grid.push_back(std::stod(a));
        gs.Q.push_back(std::stod(b));
        gs.Qp.push_back(std::stod(c));
    }
    if (gs.r_grid.size() < 2) {
        throw ShapeError("read_profile_csv: need at least two rows");
    }
    gs.decay_rate = std::sqrt(2.0 / (p - 2.0));
    gs.r_splice = gs.r_max();
    gs.tail_amplitude = gs.Q.back() / std::cyl_bessel_k(0.0, gs.decay_rate * gs.r_max());
    finish_metadata(gs);
    return gs;
}

namespace {

double gns_from_norms(double lp, double grad2, double mass, double p, const GroundStateProfile &gs) {
    if (!(mass > 0.0) || !(grad2 > 0.0)) {
        throw DomainError("gns_ratio: undefined for the zero function");
    }
    return lp / (0.5 * p * std::pow(gs.mass, 0.5 * (2.0 - p)) * std::pow(grad2, 0.5 * (p - 2.0)) * mass);
}

}  // namespace

double gns_ratio(const RadialGridFunction &u, double p, const GroundStateProfile &gs) {
    if (u.r.size() != u.u.size() || u.r.size() != u.ur.size() || u.r.size() < 2) {
        throw ShapeError("gns_ratio: grid arrays must have equal length >= 2");
    }
    std::vector<double> a(u.r.size());
    std::vector<double> g(u.r.size());
    std::vector<double> m(u.r.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = std::pow(std::fabs(u.u[i]), p);
        g[i] = u.ur[i] * u.ur[i];
        m[i] = u.u[i] * u.u[i];
    }
    return gns_from_norms(trapezoid_2d(u.r, a), trapezoid_2d(u.r, g), trapezoid_2d(u.r, m), p, gs);
}

double gns_ratio(const FieldCoeffs &u, const DiscEigenbasis &basis, double p, const GroundStateProfile &gs) {
    const Eigen::VectorXd mod = basis.synthesize(u).cwiseAbs();
    const Eigen::VectorXd a = mod.array().pow(p).matrix();
    const double lp = integrate(basis.quad(), a);
    const double grad2 = h1_inner(u, u, basis);
    const double mass = l2_inner(u, u);
    return gns_from_norms(lp, grad2, mass, p, gs);
}

double soliton_scaled(const GroundStateProfile &gs, double delta, double r) {
    if (!(delta > 0.0)) {
        throw DomainError("soliton_scaled: delta must be positive");
    }
    if (r < 0.0) {
        throw DomainError("soliton_scaled: negative radius");
    }
    return gs.value(r / delta) / delta;
}

double soliton_scaled_d_delta(const GroundStateProfile &gs, double delta, double r) {
    if (!(delta > 0.0)) {
        throw DomainError("soliton_scaled_d_delta: delta must be positive");
    }
    if (r < 0.0) {
        throw DomainError("soliton_scaled_d_delta: negative radius");
    }
    const double s = r / delta;
    return -(gs.value(s) + s * gs.derivative(s)) / (delta * delta);
}

double soliton_scaled_dr(const GroundStateProfile &gs, double delta, double r) {
    if (!(delta > 0.0)) {
        throw DomainError("soliton_scaled_dr: delta must be positive");
    }
    return gs.derivative(r / delta) / (delta * delta);
}

FieldCoeffs restricted_soliton(const GroundStateProfile &gs, double delta, const DiscEigenbasis &basis,
                               std::size_t m) {
    const auto &nodes = basis.quad().nodes;
    const double edge = soliton_scaled(gs, delta, basis.radius());
    Eigen::VectorXd f(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        f[static_cast<Eigen::Index>(i)] = soliton_scaled(gs, delta, nodes[i]) - edge;
    }
    return basis.project(f, m);
}

FieldCoeffs d_delta_soliton(const GroundStateProfile &gs, double delta, const DiscEigenbasis &basis,
                            std::size_t m) {
    const auto &nodes = basis.quad().nodes;
    const double edge = soliton_scaled_d_delta(gs, delta, basis.radius());
    Eigen::VectorXd f(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        f[static_cast<Eigen::Index>(i)] = soliton_scaled_d_delta(gs, delta, nodes[i]) - edge;
    }
    return basis.project(f, m);
}

}  // namespace nlsgibbs
