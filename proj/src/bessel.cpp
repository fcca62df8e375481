#include "nlsgibbs/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs::bessel {

namespace {

using ld = long double;

constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr ld kEulerGammaL = 0.577215664901532860606512090082402431L;

void require_finite(double x, const char *fn) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": non-finite argument");
    }
}

// Miller backward recurrence. Returns J0, J1 and the Neumann sum
// sum_{k>=1} (-1)^k J_{2k}(x) / k, all normalised.
struct MillerResult {
    ld j0;
    ld j1;
    ld neumann;
};

MillerResult miller(ld x) {
    int order = static_cast<int>(x) + 60;
    if (order % 2 != 0) {
        ++order;
    }
    ld next = 0.0L;  // J_{k+1}
    ld cur = 1e-30L; // J_k
    ld norm = 0.0L;
    ld neumann = 0.0L;
    ld j1 = 0.0L;
    for (int k = order; k >= 1; --k) {
        if (k % 2 == 0) {
            norm += 2.0L * cur;
            const ld sign = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
            neumann += sign * cur / static_cast<ld>(k / 2);
        }
        const ld prev = (2.0L * k / x) * cur - next;
        next = cur;
        cur = prev;
        if (k == 1) {
            j1 = next;
        }
        if (std::fabs(cur) > 1e300L) {
            cur *= 1e-300L;
            next *= 1e-300L;
            norm *= 1e-300L;
            neumann *= 1e-300L;
            j1 *= 1e-300L;
        }
    }
    norm += cur;
    return {cur / norm, j1 / norm, neumann / norm};
}

// Hankel asymptotic expansion for J_nu, Y_nu (nu = 0 or 1), optimally truncated.
struct HankelPair {
    ld j;
    ld y;
};

HankelPair hankel(ld x, int nu) {
    const ld mu = 4.0L * nu * nu;
    ld p = 1.0L;
    ld q = 0.0L;
    ld term = 1.0L;
    ld last = 1.0L;
    for (int k = 1; k < 200; ++k) {
        const ld odd = 2.0L * k - 1.0L;
        term *= (mu - odd * odd) / (static_cast<ld>(k) * 8.0L * x);
        const ld mag = std::fabs(term);
        if (mag > last) {
            break;
        }
        last = mag;
        // a_k / x^k with sign (-1)^{floor(k/2)}
        const ld sign = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
        if (k % 2 == 0) {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if (mag < 1e-22L) {
            break;
        }
    }
    const ld chi = x - (0.25L + 0.5L * nu) * kPiL;
    const ld amp = std::sqrt(2.0L / (kPiL * x));
    const ld c = std::cos(chi);
    const ld s = std::sin(chi);
    return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

}  // namespace

double j0_series(double xd) {
    const ld x = xd;
    const ld h2 = x * x / 4.0L;
    ld term = 1.0L;
    ld sum = 1.0L;
    for (int m = 1; m < 200; ++m) {
        term *= -h2 / (static_cast<ld>(m) * m);
        sum += term;
        if (std::fabs(term) < 1e-24L * (1.0L + std::fabs(sum))) {
            break;
        }
    }
    return static_cast<double>(sum);
}

double y0_series(double xd) {
    const ld x = xd;
    const ld h2 = x * x / 4.0L;
    ld term = 1.0L;   // (-1)^m (x/2)^{2m} / (m!)^2
    ld harmonic = 0.0L;
    ld jsum = 1.0L;
    ld psum = kEulerGammaL;
    for (int m = 1; m < 200; ++m) {
        term *= -h2 / (static_cast<ld>(m) * m);
        harmonic += 1.0L / m;
        jsum += term;
        psum += term * (kEulerGammaL - harmonic);
        if (std::fabs(term) * (1.0L + harmonic) < 1e-24L * (1.0L + std::fabs(psum))) {
            break;
        }
    }
    return static_cast<double>((2.0L / kPiL) * (std::log(x / 2.0L) * jsum + psum));
}

double j0_recurrence(double x) { return static_cast<double>(miller(x).j0); }

double y0_recurrence(double xd) {
    const ld x = xd;
    const MillerResult m = miller(x);
    return static_cast<double>((2.0L / kPiL) * (std::log(x / 2.0L) + kEulerGammaL) * m.j0 -
                               (4.0L / kPiL) * m.neumann);
}

double j0_hankel(double x) { return static_cast<double>(hankel(x, 0).j); }
double y0_hankel(double x) { return static_cast<double>(hankel(x, 0).y); }

double j0(double x) {
    require_finite(x, "j0");
    x = std::fabs(x);
    if (x <= kSeriesMax) {
        return j0_series(x);
    }
    if (x < kHankelMin) {
        return j0_recurrence(x);
    }
    return j0_hankel(x);
}

double y0(double x) {
    require_finite(x, "y0");
    if (x <= 0.0) {
        throw DomainError("y0: argument must be positive (logarithmic singularity at 0)");
    }
    if (x <= kSeriesMax) {
        return y0_series(x);
    }
    if (x < kHankelMin) {
        return y0_recurrence(x);
    }
    return y0_hankel(x);
}

double j1(double xd) {
    require_finite(xd, "j1");
    const double sign = xd < 0.0 ? -1.0 : 1.0;
    const ld x = std::fabs(xd);
    if (x <= kSeriesMax) {
        const ld h2 = x * x / 4.0L;
        ld term = x / 2.0L;
        ld sum = term;
        for (int m = 1; m < 200; ++m) {
            term *= -h2 / (static_cast<ld>(m) * (m + 1));
            sum += term;
            if (std::fabs(term) < 1e-24L * (1.0L + std::fabs(sum))) {
                break;
            }
        }
        return sign * static_cast<double>(sum);
    }
    if (x < kHankelMin) {
        return sign * static_cast<double>(miller(x).j1);
    }
    return sign * static_cast<double>(hankel(x, 1).j);
}

namespace {

// Bisection to width 1e-13 (or until the bracket stops shrinking in floating point),
// followed by one secant polish that is kept only if it improves the residual.
template <class F>
double refine_root(F &&f, double a, double b, double fa, double fb) {
    while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    double best = std::fabs(fa) < std::fabs(fb) ? a : b;
    double best_res = std::min(std::fabs(fa), std::fabs(fb));
    if (fb != fa) {
        const double secant = b - fb * (b - a) / (fb - fa);
        if (secant >= a && secant <= b) {
            const double fs = std::fabs(f(secant));
            if (fs <= best_res) {
                best = secant;
            }
        }
    }
    return best;
}

}  // namespace

BesselZeroTable j0_zeros(std::size_t n) {
    if (n == 0) {
        throw DomainError("j0_zeros: n must be positive");
    }
    BesselZeroTable table;
    table.count = n;
    table.zeros.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double guess = std::numbers::pi * (static_cast<double>(k) - 0.25);
        const double a = guess - 0.5;
        const double b = guess + 0.5;
        const double fa = j0(a);
        const double fb = j0(b);
        if ((fa < 0.0) == (fb < 0.0)) {
            throw NumericalError("j0_zeros: bracket without sign change at k=" + std::to_string(k));
        }
        table.zeros.push_back(refine_root([](double x) { return j0(x); }, a, b, fa, fb));
    }
    return table;
}

double cross_product(double alpha, double b) {
    return j0(b) * y0(alpha * b) - y0(b) * j0(alpha * b);
}

std::vector<double> cross_product_zeros(double alpha, std::size_t n) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("cross_product_zeros: alpha must lie in (0,1)");
    }
    std::vector<double> roots;
    roots.reserve(n);
    if (n == 0) {
        return roots;
    }
    // Consecutive roots are ~ pi/(1-alpha) apart (and the first exceeds it up to O(1)),
    // so a scan with an eighth of that spacing never straddles two roots.
    const double spacing = std::numbers::pi / (1.0 - alpha);
    const double step = spacing / 8.0;
    auto f = [alpha](double x) { return cross_product(alpha, x); };
    double a = 0.5 * step;
    double fa = f(a);
    while (roots.size() < n) {
        const double b = a + step;
        const double fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
        } else if ((fa < 0.0) != (fb < 0.0)) {
            const double root = refine_root(f, a, b, fa, fb);
            if (std::fabs(f(root)) > 1e-10) {
                throw NumericalError("cross_product_zeros: residual above 1e-10");
            }
            roots.push_back(root);
        }
        a = b;
        fa = fb;
    }
    return roots;
}

}  // namespace nlsgibbs::bessel
