#include "nlsgibbs/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs::kernels {

namespace {

constexpr std::size_t kBlock = 64;

void check_range(const GaussianSampler &sampler, std::size_t n_lo, std::size_t n_hi) {
    if (n_lo > n_hi || n_hi > sampler.basis().size()) {
        throw ShapeError("sample batch: mode range exceeds the basis");
    }
}

// One block of draws: coefficients, synthesis on the quadrature grid, then the integrals.
void run_block(const GaussianSampler &sampler, std::size_t n_lo, std::size_t n_hi, std::uint64_t first,
               std::size_t begin, std::size_t end, double p, SampleBatch &out) {
    const DiscEigenbasis &basis = sampler.basis();
    const auto m = static_cast<Eigen::Index>(n_hi - n_lo);
    const auto b = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXd re(m, b);
    Eigen::MatrixXd im(m, b);
    for (Eigen::Index j = 0; j < b; ++j) {
        const std::uint64_t draw = first + begin + static_cast<std::uint64_t>(j);
        for (Eigen::Index n = 0; n < m; ++n) {
            const std::size_t mode = n_lo + static_cast<std::size_t>(n);
            const std::complex<double> c = sampler.gaussian(draw, mode) / basis.wavenumber(mode);
            re(n, j) = c.real();
            im(n, j) = c.imag();
        }
    }
    const auto rows = basis.values().middleRows(static_cast<Eigen::Index>(n_lo), m);
    const Eigen::MatrixXd gre = rows.transpose() * re;
    const Eigen::MatrixXd gim = rows.transpose() * im;
    const Eigen::VectorXd &w = basis.weights();
    const bool quartic = (p == 4.0);
    for (Eigen::Index j = 0; j < b; ++j) {
        double mass = 0.0;
        double l4 = 0.0;
        double lp = 0.0;
        for (Eigen::Index i = 0; i < gre.rows(); ++i) {
            const double a2 = gre(i, j) * gre(i, j) + gim(i, j) * gim(i, j);
            mass += w[i] * a2;
            l4 += w[i] * a2 * a2;
            if (!quartic) {
                lp += w[i] * std::pow(a2, 0.5 * p);
            }
        }
        const std::size_t k = begin + static_cast<std::size_t>(j);
        out.mass[k] = mass;
        out.l4[k] = l4;
        out.potential[k] = (quartic ? l4 : lp) / p;
    }
}

SampleBatch make_batch(std::size_t count) {
    SampleBatch out;
    out.mass.resize(count);
    out.l4.resize(count);
    out.potential.resize(count);
    return out;
}

void galerkin_row(const Eigen::MatrixXd &e, const Eigen::VectorXd &wv, const Eigen::VectorXd &k, bool h1,
                  Eigen::Index n, Eigen::Index dim, Eigen::MatrixXd &m) {
    const Eigen::VectorXd scaled = e.row(n).transpose().cwiseProduct(wv);
    for (Eigen::Index j = n; j < dim; ++j) {
        const double dot = e.row(j).dot(scaled);
        const double v = h1 ? dot / (k[n] * k[j]) : dot;
        m(n, j) = v;
        m(j, n) = v;
    }
}

void check_galerkin(const DiscEigenbasis &basis, const Eigen::VectorXd &potential, std::size_t dim) {
    if (dim == 0 || dim > basis.size()) {
        throw ShapeError("galerkin: dim must lie in [1, basis size]");
    }
    if (static_cast<std::size_t>(potential.size()) != basis.quad().size()) {
        throw ShapeError("galerkin: potential must be given on the quadrature grid");
    }
}

}  // namespace

SampleBatch sample_batch_serial(const GaussianSampler &sampler, std::size_t n_lo, std::size_t n_hi,
                                std::uint64_t first, std::size_t count, double p) {
    check_range(sampler, n_lo, n_hi);
    SampleBatch out = make_batch(count);
    for (std::size_t begin = 0; begin < count; begin += kBlock) {
        run_block(sampler, n_lo, n_hi, first, begin, std::min(count, begin + kBlock), p, out);
    }
    return out;
}

SampleBatch sample_batch_parallel(const GaussianSampler &sampler, std::size_t n_lo, std::size_t n_hi,
                                  std::uint64_t first, std::size_t count, double p) {
    check_range(sampler, n_lo, n_hi);
    SampleBatch out = make_batch(count);
    const auto blocks = static_cast<long>((count + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(dynamic)
    for (long blk = 0; blk < blocks; ++blk) {
        const std::size_t begin = static_cast<std::size_t>(blk) * kBlock;
        run_block(sampler, n_lo, n_hi, first, begin, std::min(count, begin + kBlock), p, out);
    }
    return out;
}

Eigen::MatrixXd galerkin_serial(const DiscEigenbasis &basis, const Eigen::VectorXd &potential, std::size_t dim,
                                bool h1_scaled) {
    check_galerkin(basis, potential, dim);
    const auto d = static_cast<Eigen::Index>(dim);
    const Eigen::VectorXd wv = basis.weights().cwiseProduct(potential);
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        galerkin_row(basis.values(), wv, basis.wavenumbers(), h1_scaled, n, d, m);
    }
    return m;
}

Eigen::MatrixXd galerkin_parallel(const DiscEigenbasis &basis, const Eigen::VectorXd &potential, std::size_t dim,
                                  bool h1_scaled) {
    check_galerkin(basis, potential, dim);
    const auto d = static_cast<Eigen::Index>(dim);
    const Eigen::VectorXd wv = basis.weights().cwiseProduct(potential);
    Eigen::MatrixXd m(d, d);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index n = 0; n < d; ++n) {
        galerkin_row(basis.values(), wv, basis.wavenumbers(), h1_scaled, n, d, m);
    }
    return m;
}

void set_workers(int workers) {
    if (workers > 0) {
        omp_set_num_threads(workers);
    }
}

int max_workers() { return omp_get_max_threads(); }

}  // namespace nlsgibbs::kernels
