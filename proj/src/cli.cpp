#include "nlsgibbs/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlsgibbs/bessel.hpp"
#include "nlsgibbs/error.hpp"
#include "nlsgibbs/gff.hpp"
#include "nlsgibbs/ground_state.hpp"
#include "nlsgibbs/kernels.hpp"
#include "nlsgibbs/linops.hpp"
#include "nlsgibbs/partition.hpp"
#include "nlsgibbs/soliton.hpp"

#ifndef NLSGIBBS_VERSION
#define NLSGIBBS_VERSION "0.0.0"
#endif

namespace nlsgibbs::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Common {
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out_dir = ".";
    std::string config;
};

struct Params {
    std::size_t count = 1000;
    std::size_t N = 256;
    std::size_t quad = 0;
    double radius = 0.0;
    double p = 4.0;
    double tol = 1e-10;
    std::size_t stride = 10;
    std::size_t fields = 1000;
    std::size_t modes = 10;
    std::size_t samples = 10000;
    std::uint32_t stream = 0;
    std::size_t dump = 0;
    std::vector<double> K{0.5, 1.0, 1.5};
    std::string K_units = "q";
    std::vector<double> p_grid{3.0, 4.0};
    std::vector<std::size_t> N_list{64, 128, 256};
    double ceiling = 700.0;
    double gamma = 0.1;
    double theta = 0.1;
    double delta = 0.12;
    double init_theta = NAN;
    double init_delta = NAN;
    double noise = 1e-3;
    std::string input;
    std::vector<std::string> operators{"A1", "A2"};
    std::vector<double> deltas{0.2, 0.1, 0.05};
    double eta = 0.01;
    std::size_t dim = 200;
    double mc_lambda = 0.3;
    std::size_t mc_samples = 0;
    std::size_t points = 10;
};

// Everything a command needs at run time.
struct Context {
    std::string command;
    Common common;
    Params p;
    CLI::App *sub = nullptr;
    CLI::Option *seed_opt = nullptr;
    std::ostream *out = nullptr;
    std::vector<std::string> outputs;

    [[nodiscard]] fs::path path(const std::string &name) const { return fs::path(common.out_dir) / name; }

    std::ofstream open(const std::string &name) {
        std::ofstream os(path(name));
        if (!os) {
            throw UsageError(command + ".out-dir", "cannot write " + path(name).string());
        }
        outputs.push_back(name);
        return os;
    }

    void write_json(const std::string &name, const json &j) { open(name) << j.dump(2) << '\n'; }

    void need_seed(const std::string &why) const {
        if (seed_opt == nullptr || seed_opt->count() == 0) {
            throw UsageError(command + ".seed", "--seed is required " + why);
        }
    }
};

GroundStateProfile quartic_ground_state() { return solve_ground_state(4.0, 1e-10); }

std::vector<std::size_t> dyadic_up_to(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t m = 8; m <= n; m *= 2) {
        out.push_back(m);
    }
    if (out.empty() || out.back() != n) {
        out.push_back(n);
    }
    return out;
}

json cmd_bessel_zeros(Context &c) {
    const bessel::BesselZeroTable z = bessel::j0_zeros(c.p.count);
    auto os = c.open("zeros.csv");
    os << "n,z_n,j0_at_z,offset\n" << std::setprecision(17);
    double worst = 0.0;
    for (std::size_t n = 1; n <= z.size(); ++n) {
        const double zn = z[n - 1];
        const double j = bessel::j0(zn);
        worst = std::max(worst, std::fabs(j));
        os << n << ',' << zn << ',' << j << ',' << zn - M_PI * (static_cast<double>(n) - 0.25) << '\n';
    }
    return {{"count", z.size()}, {"max_abs_j0", worst}, {"last_zero", z.zeros.back()}};
}

json cmd_basis_check(Context &c) {
    const double radius = c.p.radius > 0.0 ? c.p.radius : 1.0;
    const std::size_t quad = c.p.quad > 0 ? c.p.quad : DiscEigenbasis::default_quad_points(c.p.N);
    const DiscEigenbasis basis = DiscEigenbasis::build(c.p.N, quad, radius);
    {
        auto os = c.open("basis.csv");
        basis.write_csv(os);
    }
    const Eigen::MatrixXd g = basis.gram(basis.size());
    const double gram_dev = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    auto os = c.open("modes.csv");
    os << "n,l4_norm,l4_ratio\n" << std::setprecision(17);
    double worst = 0.0;
    for (std::size_t n = 0; n < basis.size(); ++n) {
        const Eigen::VectorXd e = basis.values().row(static_cast<Eigen::Index>(n)).transpose();
        const double l4 = std::pow(integrate(basis.quad(), e.array().square().square().matrix()), 0.25);
        const double ratio = l4 / std::pow(std::log(2.0 + static_cast<double>(n + 1)), 0.25);
        worst = std::max(worst, ratio);
        os << n + 1 << ',' << l4 << ',' << ratio << '\n';
    }
    return {{"N", basis.size()}, {"quad_points", quad}, {"radius", radius}, {"max_gram_deviation", gram_dev},
            {"max_l4_ratio", worst}};
}

json cmd_ground_state(Context &c) {
    const GroundStateProfile gs = solve_ground_state(c.p.p, c.p.tol);
    {
        auto os = c.open("profile.csv");
        write_profile_csv(os, gs, c.p.stride);
    }
    return {{"p", gs.p},
            {"center_value", gs.center_value},
            {"mass", gs.mass},
            {"l2_norm", gs.l2_norm()},
            {"r_max", gs.r_max()},
            {"r_splice", gs.r_splice},
            {"tail_amplitude", gs.tail_amplitude},
            {"decay_rate", gs.decay_rate},
            {"quarter_radius", profile_radius(gs, 0.25)}};
}

json cmd_gns_check(Context &c) {
    c.need_seed("for random fields");
    const GroundStateProfile gs = solve_ground_state(c.p.p, 1e-10);
    const DiscEigenbasis basis = DiscEigenbasis::build(std::max(c.p.N, c.p.modes));
    const GaussianSampler sampler(basis, c.common.seed, c.p.stream);
    std::vector<double> ratios(c.p.fields);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < c.p.fields; ++i) {
        FieldCoeffs u(basis.size());
        u.coeffs.head(static_cast<Eigen::Index>(c.p.modes)) = sampler.sample_at(i, c.p.modes).coeffs;
        ratios[i] = gns_ratio(u, basis, c.p.p, gs);
    }
    auto os = c.open("gns.csv");
    os << "field,ratio\n" << std::setprecision(17);
    double worst = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        worst = std::max(worst, ratios[i]);
        os << i << ',' << ratios[i] << '\n';
    }
    const double q_ratio = gns_ratio(RadialGridFunction{gs.r_grid, gs.Q, gs.Qp}, c.p.p, gs);
    return {{"p", c.p.p}, {"fields", c.p.fields}, {"modes", c.p.modes}, {"max_ratio", worst}, {"ground_state_ratio", q_ratio}};
}

json cmd_sample_stats(Context &c) {
    c.need_seed("for sampling");
    const DiscEigenbasis basis = DiscEigenbasis::build(c.p.N);
    const GaussianSampler sampler(basis, c.common.seed, c.p.stream);
    const kernels::SampleBatch b = kernels::sample_batch_parallel(sampler, 0, basis.size(), 0, c.p.samples, c.p.p);
    {
        auto os = c.open("samples.csv");
        os << "draw,mass,l4,potential\n" << std::setprecision(17);
        for (std::size_t i = 0; i < c.p.samples; ++i) {
            os << i << ',' << b.mass[i] << ',' << b.l4[i] << ',' << b.potential[i] << '\n';
        }
    }
    for (std::size_t i = 0; i < std::min(c.p.dump, c.p.samples); ++i) {
        auto os = c.open("sample_" + std::to_string(i) + ".csv");
        write_sample_csv(os, sampler.sample_at(i, basis.size()));
    }
    auto stat = [](const std::vector<double> &v) {
        const MeanEstimate m = mean_and_stderr(v);
        return json{{"mean", m.mean}, {"stderr", m.stderr}};
    };
    return {{"N", c.p.N}, {"samples", c.p.samples}, {"p", c.p.p}, {"mass", stat(b.mass)}, {"l4", stat(b.l4)},
            {"potential", stat(b.potential)}};
}

json cmd_partition_sweep(Context &c) {
    c.need_seed("for Monte-Carlo estimates");
    if (c.p.K_units != "q" && c.p.K_units != "abs") {
        throw UsageError(c.command + ".K-units", "--K-units must be 'q' or 'abs'");
    }
    const GroundStateProfile gs = quartic_ground_state();
    const double scale = c.p.K_units == "q" ? gs.l2_norm() : 1.0;
    std::vector<double> K;
    for (double k : c.p.K) {
        K.push_back(k * scale);
    }
    std::size_t n_max = 0;
    for (std::size_t n : c.p.N_list) {
        n_max = std::max(n_max, n);
    }
    const DiscEigenbasis basis = DiscEigenbasis::build(n_max);
    const GaussianSampler sampler(basis, c.common.seed, c.p.stream);
    PartitionOptions opts;
    opts.log_weight_ceiling = c.p.ceiling;
    const std::vector<PartitionEstimate> rows = phase_sweep(sampler, K, c.p.p_grid, c.p.N_list, c.p.samples, opts);
    {
        auto os = c.open("partition.csv");
        write_partition_csv(os, rows);
    }
    json arr = json::array();
    for (const auto &r : rows) {
        arr.push_back(to_json(r));
    }
    c.write_json("partition.json", arr);
    json regimes = json::array();
    for (std::size_t ik = 0; ik < K.size(); ++ik) {
        for (double p : c.p.p_grid) {
            std::vector<PartitionEstimate> by_n;
            for (const auto &r : rows) {
                if (r.K == K[ik] && r.p == p) {
                    by_n.push_back(r);
                }
            }
            const bool critical = p == 4.0 && std::fabs(K[ik] - gs.l2_norm()) <= 1e-12 * gs.l2_norm();
            regimes.push_back({{"K", K[ik]},
                               {"K_over_Q", K[ik] / gs.l2_norm()},
                               {"p", p},
                               {"regime", classify_regime(by_n)},
                               {"exploratory", critical}});
        }
    }
    return {{"Q_l2_norm", gs.l2_norm()}, {"cells", rows.size()}, {"regimes", regimes}};
}

json cmd_s_gamma(Context &c) {
    c.need_seed("for sampling");
    if (!(c.p.gamma > 0.0 && c.p.gamma < 1.0)) {
        throw UsageError(c.command + ".gamma", "--gamma must lie in (0, 1)");
    }
    const GroundStateProfile gs = quartic_ground_state();
    const DiscEigenbasis basis = DiscEigenbasis::build(c.p.N);
    const GaussianSampler sampler(basis, c.common.seed, c.p.stream);
    const std::vector<std::size_t> Ns = dyadic_up_to(c.p.N);
    std::vector<double> margin(c.p.samples);
    std::vector<double> mass(c.p.samples);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < c.p.samples; ++i) {
        const FieldCoeffs u = sampler.sample_at(i, basis.size());
        margin[i] = s_gamma_margin(u, basis, c.p.gamma, Ns);
        mass[i] = l2_norm(u);
    }
    auto os = c.open("s_gamma.csv");
    os << "draw,margin,l2_norm,member\n" << std::setprecision(17);
    std::size_t members = 0;
    for (std::size_t i = 0; i < c.p.samples; ++i) {
        const bool in = margin[i] <= 0.0 && mass[i] <= gs.l2_norm();
        members += in ? 1 : 0;
        os << i << ',' << margin[i] << ',' << mass[i] << ',' << (in ? 1 : 0) << '\n';
    }
    return {{"N", c.p.N},
            {"gamma", c.p.gamma},
            {"samples", c.p.samples},
            {"members", members},
            {"member_fraction", static_cast<double>(members) / static_cast<double>(c.p.samples)}};
}

FieldCoeffs normal_noise(const SolitonManifold &m, const GaussianSampler &sampler, std::uint64_t draw,
                         const SolitonCoords &at, double size) {
    FieldCoeffs w = m.normal_project(sampler.sample_at(draw, m.basis().size()), at);
    w *= size / l2_norm(w);
    return w;
}

json cmd_decompose(Context &c) {
    const GroundStateProfile gs = quartic_ground_state();
    const DiscEigenbasis basis = DiscEigenbasis::build(c.p.N);
    const SolitonManifold m(gs, basis);
    FieldCoeffs u(basis.size());
    json source;
    if (!c.p.input.empty()) {
        std::ifstream is(c.p.input);
        if (!is) {
            throw UsageError(c.command + ".input", "cannot read " + c.p.input);
        }
        const FieldCoeffs in = read_sample_csv(is);
        const auto n = static_cast<Eigen::Index>(std::min(in.size(), basis.size()));
        u.coeffs.head(n) = in.coeffs.head(n);
        source = {{"input", c.p.input}};
    } else {
        c.need_seed("to synthesize the normal perturbation (or pass --input)");
        const SolitonCoords at{c.p.theta, c.p.delta};
        const GaussianSampler sampler(basis, c.common.seed, c.p.stream);
        u = m.point(at.theta, at.delta) + normal_noise(m, sampler, 0, at, c.p.noise);
        source = {{"theta", c.p.theta}, {"delta", c.p.delta}, {"noise_l2", c.p.noise}};
    }
    const SolitonCoords init{std::isnan(c.p.init_theta) ? c.p.theta : c.p.init_theta,
                             std::isnan(c.p.init_delta) ? c.p.delta : c.p.init_delta};
    const SolitonDecomposition d = m.decompose(u, init);
    {
        auto os = c.open("v.csv");
        write_sample_csv(os, d.v);
    }
    json j = to_json(d);
    j["v_file"] = "v.csv";
    j["source"] = source;
    c.write_json("decomposition.json", j);
    return j;
}

std::unique_ptr<DiscEigenbasis> operator_basis(const Context &c, OperatorKind which) {
    const bool limit = which == OperatorKind::T_R || which == OperatorKind::T_I;
    const double radius = c.p.radius > 0.0 ? c.p.radius : (limit ? 20.0 : 1.0);
    const std::size_t n = std::max(c.p.N, c.p.dim);
    return std::make_unique<DiscEigenbasis>(DiscEigenbasis::build(n, DiscEigenbasis::default_quad_points(n), radius));
}

json cmd_spectrum(Context &c) {
    const GroundStateProfile gs = quartic_ground_state();
    auto os = c.open("spectrum.csv");
    json summary = json::array();
    bool header = true;
    for (const std::string &name : c.p.operators) {
        const OperatorKind which = parse_operator(name);
        const auto basis = operator_basis(c, which);
        const GalerkinOperator op = build_constrained_operator(which, c.p.delta, c.p.eta, gs, *basis, c.p.dim);
        const Spectrum s = eigenvalues(op);
        write_spectrum_csv(os, op, s, header);
        header = false;
        summary.push_back({{"which", name},
                           {"delta", c.p.delta},
                           {"eta", c.p.eta},
                           {"dim", c.p.dim},
                           {"radius", basis->radius()},
                           {"min_eigenvalue", s.min()},
                           {"cluster", s.cluster},
                           {"positive", s.positive().size()},
                           {"negative", s.negative().size()},
                           {"resolved_negative", s.negative(kResolvedTail).size()}});
    }
    return {{"operators", summary}};
}

json spectral_products(Context &c, const GroundStateProfile &gs) {
    const auto basis = operator_basis(c, OperatorKind::A1);
    json rows = json::array();
    for (double delta : c.p.deltas) {
        double log_product = 0.0;
        double min_eig = INFINITY;
        for (OperatorKind which : {OperatorKind::A1, OperatorKind::A2}) {
            const Spectrum s = eigenvalues(build_constrained_operator(which, delta, c.p.eta, gs, *basis, c.p.dim));
            log_product += gaussian_product(s.values, c.p.eta).log_product;
            min_eig = std::min(min_eig, s.min());
        }
        rows.push_back({{"delta", delta}, {"eta", c.p.eta}, {"log_product", log_product}, {"min_eigenvalue", min_eig}});
    }
    return rows;
}

json cmd_gaussian_product(Context &c) {
    const GroundStateProfile gs = quartic_ground_state();
    json report{{"products", spectral_products(c, gs)}};
    if (c.p.mc_samples > 0) {
        c.need_seed("when --mc-samples > 0");
        const MeanEstimate mc = gaussian_factor_mc(c.p.mc_lambda, c.p.eta, c.p.mc_samples, c.common.seed);
        const double exact = gaussian_factor(c.p.mc_lambda, c.p.eta);
        report["single_factor"] = {{"lambda", c.p.mc_lambda}, {"eta", c.p.eta},       {"closed_form", exact},
                                   {"mc_mean", mc.mean},      {"mc_stderr", mc.stderr}, {"samples", mc.samples}};
    }
    c.write_json("product.json", report);
    return report;
}

json cmd_full_pipeline(Context &c) {
    c.need_seed("for the sampled diagnostics");
    const GroundStateProfile gs = quartic_ground_state();
    const DiscEigenbasis basis = DiscEigenbasis::build(c.p.N);
    const GaussianSampler sampler(basis, c.common.seed, c.p.stream);

    const std::vector<std::size_t> Ns = dyadic_up_to(c.p.N);
    std::size_t members = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : members)
    for (std::size_t i = 0; i < c.p.samples; ++i) {
        const FieldCoeffs u = sampler.sample_at(i, basis.size());
        members += (s_gamma_margin(u, basis, c.p.gamma, Ns) <= 0.0 && l2_norm(u) <= gs.l2_norm()) ? 1 : 0;
    }
    json away{{"gamma", c.p.gamma},
              {"samples", c.p.samples},
              {"member_fraction", static_cast<double>(members) / static_cast<double>(c.p.samples)}};

    const SolitonManifold m(gs, basis);
    const GaussianSampler noise = sampler.with_stream(c.p.stream + 1);
    double worst_coord = 0.0;
    double worst_orth = 0.0;
    double worst_v = 0.0;
    for (std::size_t i = 0; i < c.p.points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(c.p.points, 2) - 1);
        // Stay off the window edges so the recovered delta cannot round outside it.
        const SolitonCoords at{6.0 * t, m.delta_lower() + (0.1 + 0.8 * t) * (m.delta_upper() - m.delta_lower())};
        const FieldCoeffs w = normal_noise(m, noise, i, at, 0.01 * m.eps());
        const SolitonDecomposition d = m.decompose(m.point(at.theta, at.delta) + w, {at.theta + 0.01, at.delta * 1.01});
        worst_coord = std::max({worst_coord, std::fabs(std::remainder(d.coords.theta - at.theta, 2.0 * M_PI)),
                                std::fabs(d.coords.delta - at.delta)});
        worst_v = std::max(worst_v, l2_norm(d.v - w));
        worst_orth = std::max({worst_orth, std::fabs(d.orth_residuals[0]), std::fabs(d.orth_residuals[1])});
    }
    json decomposition{{"points", c.p.points},
                       {"max_coordinate_error", worst_coord},
                       {"max_normal_error", worst_v},
                       {"max_orth_residual", worst_orth}};

    json report{{"away_from_manifold", away}, {"decomposition", decomposition}, {"spectral", spectral_products(c, gs)}};
    c.write_json("report.json", report);
    return report;
}

using Handler = std::function<json(Context &)>;

struct Command {
    std::string name;
    std::string help;
    Handler run;
    std::function<void(CLI::App *, Params &)> options;
    bool seeded;
};

std::vector<Command> command_table() {
    return {
        {"bessel-zeros", "First zeros of J0", cmd_bessel_zeros,
         [](CLI::App *s, Params &p) { s->add_option("--count", p.count, "number of zeros")->check(CLI::PositiveNumber); },
         false},
        {"basis-check", "Orthonormality and L4 norms of the Dirichlet basis", cmd_basis_check,
         [](CLI::App *s, Params &p) {
             s->add_option("--N", p.N, "number of modes")->check(CLI::PositiveNumber);
             s->add_option("--quad", p.quad, "quadrature points (0 = default)");
             s->add_option("--radius", p.radius, "disc radius (0 = 1)");
         },
         false},
        {"ground-state", "Radial ground state by shooting", cmd_ground_state,
         [](CLI::App *s, Params &p) {
             s->add_option("--p", p.p, "nonlinearity exponent")->check(CLI::Range(2.0, 8.0));
             s->add_option("--tol", p.tol, "shooting tolerance")->check(CLI::Range(1e-12, 1e-4));
             s->add_option("--stride", p.stride, "write every stride-th grid point")->check(CLI::PositiveNumber);
         },
         false},
        {"gns-check", "Gagliardo-Nirenberg ratio on random low-mode fields", cmd_gns_check,
         [](CLI::App *s, Params &p) {
             s->add_option("--p", p.p, "nonlinearity exponent")->check(CLI::Range(2.0, 8.0));
             s->add_option("--fields", p.fields, "number of random fields")->check(CLI::PositiveNumber);
             s->add_option("--modes", p.modes, "modes per field")->check(CLI::PositiveNumber);
             s->add_option("--N", p.N, "basis size")->check(CLI::PositiveNumber);
             s->add_option("--stream", p.stream, "sampler stream");
         },
         true},
        {"sample-stats", "Functionals of free-field samples", cmd_sample_stats,
         [](CLI::App *s, Params &p) {
             s->add_option("--N", p.N, "truncation")->check(CLI::PositiveNumber);
             s->add_option("--samples", p.samples, "number of draws")->check(CLI::PositiveNumber);
             s->add_option("--p", p.p, "exponent of the potential term")->check(CLI::Range(2.0, 8.0));
             s->add_option("--stream", p.stream, "sampler stream");
             s->add_option("--dump", p.dump, "write coefficients of the first draws");
         },
         true},
        {"partition-sweep", "Monte-Carlo partition functions over a (K, p, N) grid", cmd_partition_sweep,
         [](CLI::App *s, Params &p) {
             s->add_option("--K", p.K, "mass cutoffs")->delimiter(',');
             s->add_option("--K-units", p.K_units, "'q' (multiples of ||Q||_2) or 'abs'");
             s->add_option("--p", p.p_grid, "exponents")->delimiter(',');
             s->add_option("--N", p.N_list, "truncations")->delimiter(',');
             s->add_option("--samples", p.samples, "draws per cell")->check(CLI::PositiveNumber);
             s->add_option("--stream", p.stream, "sampler stream");
             s->add_option("--ceiling", p.ceiling, "log-weight divergence ceiling");
         },
         true},
        {"s-gamma", "S_gamma membership of free-field samples", cmd_s_gamma,
         [](CLI::App *s, Params &p) {
             s->add_option("--N", p.N, "truncation")->check(CLI::PositiveNumber);
             s->add_option("--gamma", p.gamma, "gamma in (0,1)");
             s->add_option("--samples", p.samples, "number of draws")->check(CLI::PositiveNumber);
             s->add_option("--stream", p.stream, "sampler stream");
         },
         true},
        {"decompose", "Soliton-manifold decomposition of a field", cmd_decompose,
         [](CLI::App *s, Params &p) {
             s->add_option("--N", p.N, "basis size")->check(CLI::PositiveNumber);
             s->add_option("--theta", p.theta, "phase of the synthesized point");
             s->add_option("--delta", p.delta, "dilation of the synthesized point");
             s->add_option("--noise", p.noise, "L2 size of the normal perturbation");
             s->add_option("--input", p.input, "coefficient CSV (n,re,im) to decompose instead");
             s->add_option("--init-theta", p.init_theta, "initial phase (default --theta)");
             s->add_option("--init-delta", p.init_delta, "initial dilation (default --delta)");
             s->add_option("--stream", p.stream, "sampler stream");
         },
         false},
        {"spectrum", "Eigenvalues of the constrained Galerkin operators", cmd_spectrum,
         [](CLI::App *s, Params &p) {
             s->add_option("--operator", p.operators, "A1, A2, S_plus, S_minus, T_R, T_I")->delimiter(',');
             s->add_option("--delta", p.delta, "soliton scale")->check(CLI::PositiveNumber);
             s->add_option("--eta", p.eta, "eta")->check(CLI::NonNegativeNumber);
             s->add_option("--dim", p.dim, "Galerkin dimension")->check(CLI::PositiveNumber);
             s->add_option("--N", p.N, "basis size")->check(CLI::PositiveNumber);
             s->add_option("--radius", p.radius, "disc radius (0 = 1, or 20 for T_R/T_I)");
         },
         false},
        {"gaussian-product", "Gaussian product over A1 and A2 spectra", cmd_gaussian_product,
         [](CLI::App *s, Params &p) {
             s->add_option("--delta", p.deltas, "soliton scales")->delimiter(',');
             s->add_option("--eta", p.eta, "eta")->check(CLI::NonNegativeNumber);
             s->add_option("--dim", p.dim, "Galerkin dimension")->check(CLI::PositiveNumber);
             s->add_option("--N", p.N, "basis size")->check(CLI::PositiveNumber);
             s->add_option("--mc-lambda", p.mc_lambda, "eigenvalue for the Monte-Carlo factor check");
             s->add_option("--mc-samples", p.mc_samples, "Monte-Carlo draws (0 = skip)");
         },
         false},
        {"full-pipeline", "Away-from-manifold diagnostics, decomposition and spectral product", cmd_full_pipeline,
         [](CLI::App *s, Params &p) {
             s->add_option("--N", p.N, "truncation")->check(CLI::PositiveNumber);
             s->add_option("--samples", p.samples, "draws for the S_gamma frequency")->check(CLI::PositiveNumber);
             s->add_option("--gamma", p.gamma, "gamma in (0,1)");
             s->add_option("--points", p.points, "decomposition round trips")->check(CLI::PositiveNumber);
             s->add_option("--delta", p.deltas, "soliton scales for the product")->delimiter(',');
             s->add_option("--eta", p.eta, "eta")->check(CLI::NonNegativeNumber);
             s->add_option("--dim", p.dim, "Galerkin dimension")->check(CLI::PositiveNumber);
             s->add_option("--stream", p.stream, "sampler stream");
         },
         true},
    };
}

// Inserts config-file settings that the command line does not already set.
std::vector<std::string> merge_config(const std::vector<std::string> &args, const std::vector<Command> &table,
                                      CLI::App &app) {
    std::string file;
    std::string command;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
        }
        for (const auto &c : table) {
            if (command.empty() && args[i] == c.name) {
                command = c.name;
            }
        }
    }
    if (file.empty() || command.empty()) {
        return args;
    }
    std::ifstream is(file);
    if (!is) {
        throw UsageError(command + ".config", "cannot read config file " + file);
    }
    CLI::App *sub = app.get_subcommand(command);
    std::vector<std::string> out = args;
    for (const auto &[key, value] : read_config(is, file)) {
        if (key == "config" || sub->get_option_no_throw("--" + key) == nullptr) {
            throw UsageError(command + "." + key, "config " + file + ": '" + key + "' is not an option of " + command);
        }
        bool given = false;
        for (const auto &a : args) {
            given = given || a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
        }
        if (!given) {
            out.push_back("--" + key + "=" + value);
        }
    }
    return out;
}

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json resolved_config(const CLI::App *sub) {
    json j = json::object();
    for (const CLI::Option *o : sub->get_options()) {
        const std::string name = o->get_single_name();
        if (name == "help" || name.empty()) {
            continue;
        }
        if (o->count() > 0) {
            std::string joined;
            for (const auto &r : o->results()) {
                joined += (joined.empty() ? "" : ",") + r;
            }
            j[name] = joined;
        } else {
            j[name] = o->get_default_str();
        }
    }
    return j;
}

void error_record(std::ostream &err, const std::string &command, const std::string &kind, const std::string &path,
                  const std::string &message) {
    json e{{"command", command}, {"kind", kind}, {"message", message}};
    if (!path.empty()) {
        e["path"] = path;
    }
    err << json{{"error", e}}.dump() << '\n';
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config(std::istream &is, const std::string &source) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw UsageError("config", source + ":" + std::to_string(n) + ": expected 'key = value'");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::string> subcommands() {
    std::vector<std::string> out;
    for (const auto &c : command_table()) {
        out.push_back(c.name);
    }
    return out;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    const std::vector<Command> table = command_table();
    CLI::App app{"Numerical experiments for the focusing cubic NLS Gibbs measure on the unit disc", "nlsgibbs"};
    app.set_version_flag("--version", NLSGIBBS_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Context ctx;
    ctx.out = &out;
    for (const auto &c : table) {
        CLI::App *sub = app.add_subcommand(c.name, c.help);
        c.options(sub, ctx.p);
        CLI::Option *seed = sub->add_option("--seed", ctx.common.seed, "RNG seed");
        if (c.seeded) {
            seed->required();
        }
        sub->add_option("--workers", ctx.common.workers, "OpenMP workers (0 = runtime default)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--out-dir", ctx.common.out_dir, "output directory");
        sub->add_option("--config", ctx.common.config, "flat key = value file; flags win");
    }

    std::string command = "nlsgibbs";
    try {
        std::vector<std::string> merged = merge_config(args, table, app);
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        error_record(err, command, "usage", "", e.what());
        err << app.help();
        return kUsage;
    } catch (const UsageError &e) {
        error_record(err, command, "usage", e.path(), e.what());
        return kUsage;
    }

    CLI::App *sub = app.get_subcommands().front();
    ctx.command = command = sub->get_name();
    ctx.sub = sub;
    ctx.seed_opt = sub->get_option("--seed");
    const Command *cmd = nullptr;
    for (const auto &c : table) {
        if (c.name == command) {
            cmd = &c;
        }
    }
    try {
        fs::create_directories(ctx.common.out_dir);
        kernels::set_workers(ctx.common.workers);
        const auto t0 = std::chrono::steady_clock::now();
        const json summary = cmd->run(ctx);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ctx.write_json("summary.json", summary);
        json manifest{{"command", command},
                      {"version", NLSGIBBS_VERSION},
                      {"timestamp", timestamp()},
                      {"seconds", seconds},
                      {"workers", kernels::max_workers()},
                      {"config", resolved_config(sub)},
                      {"outputs", ctx.outputs}};
        std::ofstream(ctx.path("manifest.json")) << manifest.dump(2) << '\n';
        out << summary.dump(2) << '\n';
        return kOk;
    } catch (const UsageError &e) {
        error_record(err, command, "usage", e.path(), e.what());
        return kUsage;
    } catch (const Error &e) {
        error_record(err, command, e.kind(), "", e.what());
        std::ofstream(ctx.path("error.json"))
            << json{{"command", command}, {"kind", e.kind()}, {"message", e.what()}}.dump(2) << '\n';
        return kNumeric;
    } catch (const std::exception &e) {
        error_record(err, command, "internal", "", e.what());
        return kNumeric;
    }
}

int run(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace nlsgibbs::cli
