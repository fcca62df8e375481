#pragma once

#include <cstddef>
#include <vector>

namespace nlsgibbs::bessel {

/// First `count` positive zeros of J0, ascending.
struct BesselZeroTable {
    std::size_t count = 0;
    std::vector<double> zeros;

    [[nodiscard]] double operator[](std::size_t k) const { return zeros[k]; }
    [[nodiscard]] std::size_t size() const noexcept { return zeros.size(); }
};

/// Regime boundaries for J0/Y0 evaluation. Below `kSeriesMax` the ascending power series
/// is summed in extended precision; between it and `kHankelMin` the Miller backward
/// recurrence (normalised by 1 = J0 + 2 sum J_2k) is used; beyond that the Hankel
/// asymptotic expansion with its optimal truncation.
inline constexpr double kSeriesMax = 12.0;
inline constexpr double kHankelMin = 25.0;

double j0(double x);
double y0(double x);

/// Regime-specific evaluators, exposed so the crossover can be cross-checked.
double j0_series(double x);
double y0_series(double x);
double j0_recurrence(double x);
double y0_recurrence(double x);
double j0_hankel(double x);
double y0_hankel(double x);

/// J1 = -J0'. Needed for eigenfunction derivatives; same regime split as j0.
double j1(double x);

BesselZeroTable j0_zeros(std::size_t n);

/// f(B) = J0(B) Y0(alpha B) - Y0(B) J0(alpha B): vanishes at the Dirichlet eigenvalues
/// (square roots) of the annulus alpha < r < 1.
double cross_product(double alpha, double b);

/// First n roots of `cross_product(alpha, .)`, each refined to |f| <= 1e-10.
std::vector<double> cross_product_zeros(double alpha, std::size_t n);

}  // namespace nlsgibbs::bessel
