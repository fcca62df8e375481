#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "nlsgibbs/disc_spectrum.hpp"

namespace nlsgibbs {

/// Radial ground state of (p-2) Delta Q + 2 Q^{p-1} - 2 Q = 0 on R^2, tabulated on a uniform
/// grid r_i = i h. Beyond the last node Q follows its Bessel-K tail A K0(k r), k^2 = 2/(p-2).
struct GroundStateProfile {
    double p = 4.0;
    std::vector<double> r_grid;
    std::vector<double> Q;
    std::vector<double> Qp;
    double mass = 0.0;
    double center_value = 0.0;
    double tail_amplitude = 0.0;
    double decay_rate = 0.0;
    /// Radius where the shooting solution was handed over to the analytic tail.
    double r_splice = 0.0;

    [[nodiscard]] double r_max() const { return r_grid.back(); }
    [[nodiscard]] double l2_norm() const;
    /// Q(r) for r >= 0, cubic Hermite between nodes, Bessel-K tail past the grid.
    [[nodiscard]] double value(double r) const;
    [[nodiscard]] double derivative(double r) const;
};

struct ShootingOptions {
    double step = 1e-4;
    double r_start = 1e-6;
    double r_cap = 60.0;
    /// The shooting solution is followed until Q drops below this level, then the tail takes over.
    double splice_level = 1e-5;
    /// The tabulated grid ends at the first node with Q below this level.
    double tail_floor = 1e-9;
};

GroundStateProfile solve_ground_state(double p, double tol, const ShootingOptions &opts = {});

/// E[Q(r)] = Q_r^2/2 + 2/(p(p-2)) Q^p - Q^2/(p-2) at every node.
std::vector<double> energy_profile(const GroundStateProfile &gs);

/// Smallest r with Q(r) <= level.
double profile_radius(const GroundStateProfile &gs, double level);

void write_profile_csv(std::ostream &os, const GroundStateProfile &gs, std::size_t stride = 1);
GroundStateProfile read_profile_csv(std::istream &is, double p);

/// Radial samples of a function on R^2 (or on a disc, extended by zero).
struct RadialGridFunction {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> ur;
};

/// ||u||_p^p / [(p/2) ||Q||_2^{2-p} ||grad u||_2^{p-2} ||u||_2^2]; at most 1 by sharp GNS.
double gns_ratio(const RadialGridFunction &u, double p, const GroundStateProfile &gs);
double gns_ratio(const FieldCoeffs &u, const DiscEigenbasis &basis, double p, const GroundStateProfile &gs);

/// Q_delta(r) = Q(r/delta)/delta.
double soliton_scaled(const GroundStateProfile &gs, double delta, double r);
/// d/d delta of Q_delta(r) = -delta^{-2}[Q(s) + s Q'(s)], s = r/delta.
double soliton_scaled_d_delta(const GroundStateProfile &gs, double delta, double r);
/// d/dr of Q_delta(r).
double soliton_scaled_dr(const GroundStateProfile &gs, double delta, double r);

/// Coefficients of Q_delta - Q_delta(R) on the disc of radius R (first m modes; 0 = all).
FieldCoeffs restricted_soliton(const GroundStateProfile &gs, double delta, const DiscEigenbasis &basis,
                               std::size_t m = 0);
FieldCoeffs d_delta_soliton(const GroundStateProfile &gs, double delta, const DiscEigenbasis &basis,
                            std::size_t m = 0);

}  // namespace nlsgibbs
