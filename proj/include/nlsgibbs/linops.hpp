#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlsgibbs/disc_spectrum.hpp"
#include "nlsgibbs/gff.hpp"
#include "nlsgibbs/ground_state.hpp"

namespace nlsgibbs {

enum class OperatorKind { A1, A2, S_plus, S_minus, T_R, T_I };

std::string to_string(OperatorKind k);
OperatorKind parse_operator(const std::string &name);

/// Symmetric Galerkin matrix. A1, A2, S_plus, S_minus live in the H1-orthonormal basis e_n/k_n
/// (matrix of (-Delta)^{-1} V); T_R and T_I are Schroedinger operators in the L2 basis e_n.
struct GalerkinOperator {
    OperatorKind which = OperatorKind::A1;
    double delta = 0.0;
    double eta = 0.0;
    std::size_t dim = 0;
    Eigen::MatrixXd matrix;
    /// Orthonormal constraint directions (columns) projected out of `matrix`.
    Eigen::MatrixXd constraints;
};

struct OperatorOptions {
    /// Radius (in units of delta) where Q <= 1/4; 0 means measure it from the profile.
    double a = 0.0;
    /// Depth of the S_minus well in units of delta^{-2}.
    double well_depth = 3.0;
    /// Penalty (in units of delta^{-2}) that confines S_plus/S_minus eigenfunctions.
    double penalty = 1e4;
    bool parallel = true;
};

GalerkinOperator build_constrained_operator(OperatorKind which, double delta, double eta, const GroundStateProfile &gs,
                                            const DiscEigenbasis &basis, std::size_t dim,
                                            const OperatorOptions &opts = {});

struct Spectrum {
    /// Descending, with the near-zero constrained cluster removed.
    std::vector<double> values;
    /// Eigenvector weight in the top quarter of the Galerkin modes, aligned with `values`.
    std::vector<double> tail_weight;
    std::size_t cluster = 0;

    /// Positive eigenvalues, largest first. With tail_tol > 0 only those whose tail weight is below it.
    [[nodiscard]] std::vector<double> positive(double tail_tol = 0.0) const;
    /// Negative eigenvalues, most negative first.
    [[nodiscard]] std::vector<double> negative(double tail_tol = 0.0) const;
    [[nodiscard]] double min() const;
};

/// Tail weight below which an eigenvalue counts as resolved by the Galerkin space.
inline constexpr double kResolvedTail = 1e-2;

Spectrum eigenvalues(const GalerkinOperator &op, double cluster_tol = 1e-12);

/// S_plus: mu_k = delta^{-2}/(4 B_k^2) from the annulus roots of J0(B)Y0(B a delta) - Y0(B)J0(B a delta).
/// S_minus: nu_k = -depth delta^{-2}/A_k^2 with J0(A a delta) = 0.
std::vector<double> comparison_spectrum(OperatorKind which, double delta, double a, std::size_t n,
                                        double well_depth = 3.0);

struct GaussianProduct {
    double product = 1.0;
    double log_product = 0.0;
};

/// prod (1 + 2(1-eta) lambda)^{-1/2}, accumulated in log space.
GaussianProduct gaussian_product(const std::vector<double> &eigs, double eta);

/// Single factor E[exp(-(1-eta) lambda g^2)] = (1 + 2(1-eta) lambda)^{-1/2}, g real standard normal.
double gaussian_factor(double lambda, double eta);
MeanEstimate gaussian_factor_mc(double lambda, double eta, std::size_t samples, std::uint64_t seed);

/// (1/2)<-Delta w, w> - <Q_delta^2, Re(w^2)/2 + |w|^2> + (delta^{-2}/2)<w, w> after removing the
/// L2 component of Re w along Q_delta. `basis` is usually a large disc standing in for R^2.
double second_derivative_margin(const FieldCoeffs &w, double delta, const GroundStateProfile &gs,
                                const DiscEigenbasis &basis);

/// Writes rows (which, delta, eta, dim, k, lambda_k).
void write_spectrum_csv(std::ostream &os, const GalerkinOperator &op, const Spectrum &s, bool header = true);

}  // namespace nlsgibbs
