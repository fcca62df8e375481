#include "nlsgibbs/gff.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/kernels.hpp"
#include "nlsgibbs/rng.hpp"

namespace nlsgibbs {

std::complex<double> GaussianSampler::gaussian(std::uint64_t draw, std::size_t mode) const {
    return rng::complex_gaussian(seed_, stream_, draw, static_cast<std::uint32_t>(mode));
}

FieldCoeffs GaussianSampler::sample_band(std::uint64_t draw, std::size_t n_lo, std::size_t n_hi) const {
    if (n_lo > n_hi || n_hi > basis_->size()) {
        throw ShapeError("sample: truncation " + std::to_string(n_hi) + " exceeds basis size " +
                         std::to_string(basis_->size()));
    }
    FieldCoeffs u(n_hi);
    for (std::size_t n = n_lo; n < n_hi; ++n) {
        u[n] = gaussian(draw, n) / basis_->wavenumber(n);
    }
    return u;
}

FieldCoeffs GaussianSampler::sample_at(std::uint64_t draw, std::size_t n) const { return sample_band(draw, 0, n); }

FieldCoeffs GaussianSampler::sample(std::size_t n) {
    FieldCoeffs u = sample_at(next_, n);
    ++next_;
    return u;
}

FieldFunctionals functionals(const FieldCoeffs &u, const DiscEigenbasis &basis, double p) {
    const Eigen::VectorXd a2 = basis.synthesize(u).cwiseAbs2();
    FieldFunctionals f;
    f.mass_l2 = integrate(basis.quad(), a2);
    f.l4_integral = integrate(basis.quad(), a2.cwiseProduct(a2));
    f.hamiltonian_potential = integrate(basis.quad(), a2.array().pow(0.5 * p).matrix()) / p;
    return f;
}

MeanEstimate mean_and_stderr(const std::vector<double> &values) {
    if (values.size() < 2) {
        throw StatisticsError("mean_and_stderr: need at least two samples");
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double n = static_cast<double>(values.size());
    return {mean, std::sqrt(ss / (n - 1.0) / n), values.size()};
}

MeanEstimate tail_l4_mean(const GaussianSampler &sampler, std::size_t n_cut, std::size_t n_max,
                          std::size_t samples) {
    if (samples < 2) {
        throw StatisticsError("tail_l4_mean: need at least two samples");
    }
    if (n_cut > n_max) {
        throw DomainError("tail_l4_mean: N_cut must not exceed N_max");
    }
    if (n_cut == n_max) {
        return {0.0, 0.0, samples};
    }
    const kernels::SampleBatch batch = kernels::sample_batch_parallel(sampler, n_cut, n_max, 0, samples, 4.0);
    std::vector<double> norms(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        norms[i] = std::pow(batch.l4[i], 0.25);
    }
    return mean_and_stderr(norms);
}

double gaussian_exponential_moment(double c3, std::size_t n) {
    if (!(c3 < 1.0)) {
        throw DivergenceError("gaussian_exponential_moment: c3 >= 1 makes the moment infinite");
    }
    if (c3 < 0.0) {
        throw DomainError("gaussian_exponential_moment: c3 must be nonnegative");
    }
    return std::exp(0.5 * static_cast<double>(n) * std::log(1.0 / (1.0 - c3)));
}

MeanEstimate gaussian_exponential_moment_mc(double c3, std::size_t n, std::size_t samples, std::uint64_t seed) {
    if (!(c3 < 1.0)) {
        throw DivergenceError("gaussian_exponential_moment_mc: c3 >= 1 makes the moment infinite");
    }
    std::vector<double> values(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double g = std::sqrt(2.0) * rng::complex_gaussian(seed, 0, s, static_cast<std::uint32_t>(k)).real();
            sum += g * g;
        }
        values[s] = std::exp(0.5 * c3 * sum);
    }
    return mean_and_stderr(values);
}

void write_sample_csv(std::ostream &os, const FieldCoeffs &u) {
    os << "n,re,im\n" << std::setprecision(17);
    for (std::size_t i = 0; i < u.size(); ++i) {
        os << (i + 1) << ',' << u[i].real() << ',' << u[i].imag() << '\n';
    }
}

FieldCoeffs read_sample_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ShapeError("read_sample_csv: empty file");
    }
    std::vector<std::complex<double>> c;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string n;
        std::string re;
        std::string im;
        if (!std::getline(row, n, ',') || !std::getline(row, re, ',') || !std::getline(row, im, ',')) {
            throw ShapeError("read_sample_csv: malformed row '" + line + "'");
        }
        if (std::stoul(n) != c.size() + 1) {
            throw ShapeError("read_sample_csv: modes must be listed as 1, 2, 3, ...");
        }
        c.emplace_back(std::stod(re), std::stod(im));
    }
    FieldCoeffs u(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        u[i] = c[i];
    }
    return u;
}

}  // namespace nlsgibbs
