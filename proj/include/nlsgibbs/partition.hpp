#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlsgibbs/gff.hpp"
#include "nlsgibbs/ground_state.hpp"
#include "nlsgibbs/kernels.hpp"

namespace nlsgibbs {

/// Monte-Carlo estimate of Z = E[1{||P_N u||_2 <= K} exp((1/p) int |P_N u|^p)].
struct PartitionEstimate {
    double K = 0.0;
    double p = 0.0;
    std::size_t N = 0;
    std::size_t samples = 0;
    double mean = 0.0;
    double stderr = 0.0;
    double accepted_fraction = 0.0;
    /// Largest accepted log-weight; -inf when nothing was accepted.
    double log_max_weight = 0.0;
    bool diverged = false;

    double log_mean = 0.0;
    /// Hill estimate of the tail index of the accepted weights (NaN with too few accepted).
    double tail_index = 0.0;
};

struct PartitionOptions {
    double log_weight_ceiling = 700.0;
};

PartitionEstimate estimate_partition(const GaussianSampler &sampler, double K, double p, std::size_t N,
                                     std::size_t samples, const PartitionOptions &opts = {});

/// Same estimate from precomputed per-sample functionals (draws 0..samples-1 of the stream).
PartitionEstimate estimate_from_batch(const kernels::SampleBatch &batch, double K, double p, std::size_t N,
                                      const PartitionOptions &opts = {});

/// Every (K, p, N) cell on common random numbers; ordered N-major, then p, then K.
std::vector<PartitionEstimate> phase_sweep(const GaussianSampler &sampler, const std::vector<double> &K_grid,
                                           const std::vector<double> &p_grid, const std::vector<std::size_t> &N_list,
                                           std::size_t samples, const PartitionOptions &opts = {});

/// Heuristic label for a run of estimates at increasing N (same K, p):
/// "diverged", "growing", "stable" or "indeterminate".
std::string classify_regime(const std::vector<PartitionEstimate> &by_n, double joint_se = 3.0);

void write_partition_csv(std::ostream &os, const std::vector<PartitionEstimate> &rows);
nlohmann::json to_json(const PartitionEstimate &e);

/// max over N in N_list of [ (1/4) int |P_N u|^4 - ((1-gamma)/2) ||P_N u||_{H1}^2 ].
double s_gamma_margin(const FieldCoeffs &u, const DiscEigenbasis &basis, double gamma,
                      const std::vector<std::size_t> &N_list);
bool in_s_gamma(const FieldCoeffs &u, const DiscEigenbasis &basis, double gamma,
                const std::vector<std::size_t> &N_list, const GroundStateProfile &gs);

}  // namespace nlsgibbs
