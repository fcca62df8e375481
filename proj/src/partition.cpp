#include "nlsgibbs/partition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>

#include "nlsgibbs/error.hpp"

namespace nlsgibbs {

namespace {

constexpr std::size_t kMinSamples = 100;

double hill_index(std::vector<double> logs) {
    const std::size_t n = logs.size();
    const std::size_t k = std::max<std::size_t>(10, n / 20);
    if (n < k + 1) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::partial_sort(logs.begin(), logs.begin() + static_cast<std::ptrdiff_t>(k + 1), logs.end(),
                      std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s += logs[i] - logs[k];
    }
    return s > 0.0 ? static_cast<double>(k) / s : std::numeric_limits<double>::infinity();
}

}  // namespace

PartitionEstimate estimate_from_batch(const kernels::SampleBatch &batch, double K, double p, std::size_t N,
                                      const PartitionOptions &opts) {
    if (!(K > 0.0)) {
        throw DomainError("estimate_partition: K must be positive");
    }
    if (!(p >= 2.0)) {
        throw DomainError("estimate_partition: p must be at least 2");
    }
    const std::size_t n = batch.mass.size();
    if (n < kMinSamples) {
        throw StatisticsError("estimate_partition: need at least 100 samples");
    }
    PartitionEstimate e;
    e.K = K;
    e.p = p;
    e.N = N;
    e.samples = n;
    const double k2 = K * K;
    std::vector<double> logs;
    logs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (batch.mass[i] <= k2) {
            logs.push_back(batch.potential[i]);
        }
    }
    e.accepted_fraction = static_cast<double>(logs.size()) / static_cast<double>(n);
    if (logs.empty()) {
        e.mean = 0.0;
        e.stderr = 0.0;
        e.log_mean = -std::numeric_limits<double>::infinity();
        e.log_max_weight = -std::numeric_limits<double>::infinity();
        e.tail_index = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    // Rejected samples contribute exp(-inf) = 0 to both sums.
    double s1 = 0.0;
    double s2 = 0.0;
    for (double l : logs) {
        const double t = std::exp(l - top);
        s1 += t;
        s2 += t * t;
    }
    const double nn = static_cast<double>(n);
    const double m1 = s1 / nn;
    const double m2 = s2 / nn;
    const double var = std::max(0.0, (m2 - m1 * m1) * nn / (nn - 1.0));
    e.log_max_weight = top;
    e.log_mean = top + std::log(m1);
    e.diverged = top > opts.log_weight_ceiling;
    e.mean = std::exp(e.log_mean);
    e.stderr = std::exp(top) * std::sqrt(var / nn);
    e.tail_index = hill_index(std::move(logs));
    if (!e.diverged && (!std::isfinite(e.mean) || !std::isfinite(e.stderr))) {
        throw InternalError("estimate_partition: overflow below the log-weight ceiling");
    }
    return e;
}

PartitionEstimate estimate_partition(const GaussianSampler &sampler, double K, double p, std::size_t N,
                                     std::size_t samples, const PartitionOptions &opts) {
    if (samples < kMinSamples) {
        throw StatisticsError("estimate_partition: need at least 100 samples");
    }
    const kernels::SampleBatch batch = kernels::sample_batch_parallel(sampler, 0, N, 0, samples, p);
    return estimate_from_batch(batch, K, p, N, opts);
}

std::vector<PartitionEstimate> phase_sweep(const GaussianSampler &sampler, const std::vector<double> &K_grid,
                                           const std::vector<double> &p_grid, const std::vector<std::size_t> &N_list,
                                           std::size_t samples, const PartitionOptions &opts) {
    if (K_grid.empty() || p_grid.empty() || N_list.empty()) {
        throw DomainError("phase_sweep: grids must be nonempty");
    }
    if (samples < kMinSamples) {
        throw StatisticsError("phase_sweep: need at least 100 samples");
    }
    std::vector<PartitionEstimate> out;
    for (std::size_t N : N_list) {
        for (double p : p_grid) {
            const kernels::SampleBatch batch = kernels::sample_batch_parallel(sampler, 0, N, 0, samples, p);
            for (double K : K_grid) {
                out.push_back(estimate_from_batch(batch, K, p, N, opts));
            }
        }
    }
    return out;
}

std::string classify_regime(const std::vector<PartitionEstimate> &by_n, double joint_se) {
    if (by_n.size() < 2) {
        return "indeterminate";
    }
    for (const auto &e : by_n) {
        if (e.diverged) {
            return "diverged";
        }
    }
    bool increasing = true;
    for (std::size_t i = 1; i < by_n.size(); ++i) {
        increasing = increasing && by_n[i].mean > by_n[i - 1].mean;
    }
    const auto &a = by_n.front();
    const auto &b = by_n.back();
    const double se = std::hypot(a.stderr, b.stderr);
    const double gap = b.mean - a.mean;
    if (std::fabs(gap) <= joint_se * se) {
        return "stable";
    }
    if (increasing && gap > joint_se * se) {
        return "growing";
    }
    return "indeterminate";
}

void write_partition_csv(std::ostream &os, const std::vector<PartitionEstimate> &rows) {
    os << "K,p,N,samples,mean,stderr,accepted_fraction,log_max_weight,diverged\n" << std::setprecision(17);
    for (const auto &e : rows) {
        os << e.K << ',' << e.p << ',' << e.N << ',' << e.samples << ',' << e.mean << ',' << e.stderr << ','
           << e.accepted_fraction << ',' << e.log_max_weight << ',' << (e.diverged ? "true" : "false") << '\n';
    }
}

nlohmann::json to_json(const PartitionEstimate &e) {
    nlohmann::json j;
    j["K"] = e.K;
    j["p"] = e.p;
    j["N"] = e.N;
    j["samples"] = e.samples;
    j["mean"] = e.mean;
    j["stderr"] = e.stderr;
    j["accepted_fraction"] = e.accepted_fraction;
    // JSON has no -inf; an empty acceptance set is reported as null.
    j["log_max_weight"] = std::isfinite(e.log_max_weight) ? nlohmann::json(e.log_max_weight) : nlohmann::json();
    j["diverged"] = e.diverged;
    return j;
}

double s_gamma_margin(const FieldCoeffs &u, const DiscEigenbasis &basis, double gamma,
                      const std::vector<std::size_t> &N_list) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("s_gamma_margin: gamma must lie in (0, 1)");
    }
    if (N_list.empty()) {
        throw DomainError("s_gamma_margin: empty N list");
    }
    double margin = -std::numeric_limits<double>::infinity();
    for (std::size_t N : N_list) {
        if (N > u.size()) {
            throw ShapeError("s_gamma_margin: N exceeds the field length");
        }
        const FieldCoeffs low = project_low(u, N);
        const Eigen::VectorXd a2 = basis.synthesize(low).cwiseAbs2();
        const double quartic = 0.25 * integrate(basis.quad(), a2.cwiseProduct(a2));
        const double gradient = 0.5 * (1.0 - gamma) * h1_inner(low, low, basis);
        margin = std::max(margin, quartic - gradient);
    }
    return margin;
}

bool in_s_gamma(const FieldCoeffs &u, const DiscEigenbasis &basis, double gamma,
                const std::vector<std::size_t> &N_list, const GroundStateProfile &gs) {
    return s_gamma_margin(u, basis, gamma, N_list) <= 0.0 && l2_norm(u) <= gs.l2_norm();
}

}  // namespace nlsgibbs
