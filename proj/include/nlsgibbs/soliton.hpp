#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "json.hpp"
#include "nlsgibbs/disc_spectrum.hpp"
#include "nlsgibbs/ground_state.hpp"

namespace nlsgibbs {

struct SolitonCoords {
    double theta = 0.0;
    double delta = 0.1;
};

double canonical_angle(double theta);

struct SolitonDecomposition {
    SolitonCoords coords;
    FieldCoeffs v;
    double residual_l2 = 0.0;
    /// <v, -Delta(i e^{i theta} Q_delta)> and <v, -Delta(e^{i theta} d_delta Q_delta)>.
    std::array<double, 2> orth_residuals{};
    int iterations = 0;
    double contraction = 0.0;
};

nlohmann::json to_json(const SolitonDecomposition &d);

struct SolitonWindow {
    double delta_upper = 0.25;
    double delta_floor = 0.02;
    double lower_factor = 4.0;
    double eps_fraction = 0.05;
};

/// Restricted solitons e^{i theta} Q_delta, truncated to the modes of `basis`, with their
/// tangent frame, normal projection and the normal-bundle decomposition.
class SolitonManifold {
  public:
    SolitonManifold(const GroundStateProfile &gs, const DiscEigenbasis &basis, SolitonWindow window = {});

    [[nodiscard]] const DiscEigenbasis &basis() const noexcept { return *basis_; }
    [[nodiscard]] const GroundStateProfile &ground_state() const noexcept { return *gs_; }
    [[nodiscard]] double delta_lower() const;
    [[nodiscard]] double delta_upper() const noexcept { return window_.delta_upper; }
    [[nodiscard]] double eps() const;
    void check_window(double delta) const;

    /// P_N e^{i theta} Q_delta.
    [[nodiscard]] FieldCoeffs point(double theta, double delta) const;
    /// (i e^{i theta} Q_delta, e^{i theta} d_delta Q_delta), unnormalised.
    [[nodiscard]] std::pair<FieldCoeffs, FieldCoeffs> tangents(double theta, double delta) const;
    [[nodiscard]] FieldCoeffs normal_project(const FieldCoeffs &u, const SolitonCoords &c) const;

    /// G(theta, delta, w) = P_N e^{i theta} Q_delta + P_V(theta, delta) w.
    [[nodiscard]] FieldCoeffs chart(double theta, double delta, const FieldCoeffs &w) const;

    [[nodiscard]] SolitonDecomposition decompose(const FieldCoeffs &u, const SolitonCoords &initial,
                                                 int max_iterations = 100) const;

    /// max over the probe directions e of |A^{-1} dG(x) e - e| / |e|, with A = dG at the base
    /// point and dG(x) from centred differences; x = (theta, delta ratio, w) relative to `base`.
    [[nodiscard]] double chord_deviation(const SolitonCoords &base, double theta, double delta_ratio,
                                         const FieldCoeffs &w, const std::vector<FieldCoeffs> &probes) const;

  private:
    struct Frame {
        FieldCoeffs t1;
        FieldCoeffs t2;
        double n1;  // squared H1 norms
        double n2;
    };
    [[nodiscard]] Frame frame(double theta, double delta) const;
    [[nodiscard]] FieldCoeffs project_with(const FieldCoeffs &u, const Frame &f) const;

    const GroundStateProfile *gs_;
    const DiscEigenbasis *basis_;
    SolitonWindow window_;
};

/// Frame of the decomposition theorem; throws WindowError below max(4/N, 0.02).
std::pair<FieldCoeffs, FieldCoeffs> tangent_frame(const GroundStateProfile &gs, double delta,
                                                  const DiscEigenbasis &basis, std::size_t N);

/// H(u) = (1/2) ||u||_{H1}^2 - (1/4) int |u|^4.
double hamiltonian(const FieldCoeffs &u, const DiscEigenbasis &basis);

/// B(v) = delta^{-2} <q, v> + <q^2, Re(v^2)/2 + (1+eta)|v|^2>, q = P_N Q_delta.
double quadratic_form_B(const FieldCoeffs &v, double delta, double eta, const GroundStateProfile &gs,
                        const DiscEigenbasis &basis);

/// Terms of H(q + v) - H(q) for real q:
///   linear    <-Delta q - q^3, v>
///   gradient  (1/2)||v||_{H1}^2
///   quadratic -<q^2, Re(v^2)/2 + |v|^2>
///   cubic     -<q, |v|^2 v>
///   quartic   -(1/4) int |v|^4
struct HamiltonianExpansion {
    double base = 0.0;
    double perturbed = 0.0;
    double linear = 0.0;
    double gradient = 0.0;
    double quadratic = 0.0;
    double cubic = 0.0;
    double quartic = 0.0;
    /// <-Delta q - q^3 + delta^{-2} q, v>: zero for the exact soliton on R^2.
    double linear_residual = 0.0;

    [[nodiscard]] double sum() const { return linear + gradient + quadratic + cubic + quartic; }
};

HamiltonianExpansion hamiltonian_expansion(const FieldCoeffs &q, const FieldCoeffs &v, double delta,
                                           const DiscEigenbasis &basis);

/// delta^{-3} and delta^{-5}, the Jacobian factors of the (theta, delta) change of variables.
std::array<double, 2> surface_measure_factors(double delta);

}  // namespace nlsgibbs
