#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nlsgibbs/gff.hpp"

namespace nlsgibbs::kernels {

/// Per-sample functionals of a contiguous range of draws.
struct SampleBatch {
    std::vector<double> mass;       // int |u|^2
    std::vector<double> l4;         // int |u|^4
    std::vector<double> potential;  // (1/p) int |u|^p
};

/// Draws [first, first + count) of `sampler`, modes [n_lo, n_hi). The parallel version splits
/// the draws into fixed blocks and writes results by index, so it is bit-identical to the serial one.
SampleBatch sample_batch_serial(const GaussianSampler &sampler, std::size_t n_lo, std::size_t n_hi,
                                std::uint64_t first, std::size_t count, double p);
SampleBatch sample_batch_parallel(const GaussianSampler &sampler, std::size_t n_lo, std::size_t n_hi,
                                  std::uint64_t first, std::size_t count, double p);

/// M_nm = (k_n k_m)^{-1} int V e_n e_m over the first `dim` modes (V given on the quadrature grid).
/// With `h1_scaled` false the (k_n k_m)^{-1} factor is dropped (plain L2 matrix elements).
Eigen::MatrixXd galerkin_serial(const DiscEigenbasis &basis, const Eigen::VectorXd &potential, std::size_t dim,
                                bool h1_scaled = true);
Eigen::MatrixXd galerkin_parallel(const DiscEigenbasis &basis, const Eigen::VectorXd &potential, std::size_t dim,
                                  bool h1_scaled = true);

/// Sets the OpenMP worker count (0 leaves the runtime default).
void set_workers(int workers);
int max_workers();

}  // namespace nlsgibbs::kernels
