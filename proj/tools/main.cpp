#include "confract/estimators.hpp"
#include "confract/fractal.hpp"
#include "confract/geometry.hpp"
#include "confract/haar.hpp"
#include "confract/io.hpp"
#include "confract/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace confract;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << text;
}

json estimate_json(const mc::Estimate& est) {
    json j;
    j["value"] = est.value;
    j["std_error"] = est.std_error;
    j["n_samples"] = est.n_samples;
    j["hits"] = est.hits;
    j["flag"] = est.flag;
    return j;
}

geom::Configuration load_single_configuration(const std::string& path) {
    const auto configs = io::read_configurations_file(path);
    if (configs.empty()) throw std::invalid_argument(path + ": no configuration found");
    return configs.front();
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> eps;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!tok.empty()) eps.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (eps.empty()) throw std::invalid_argument("--eps: empty list");
    return eps;
}

struct GenArgs {
    int d = 2;
    int k = 3;
    double target_dim = 1.0;
    int n_per_axis = 2;
    int n = 1000;
    int burn_in = 64;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen(const GenArgs& a) {
    const auto ifs = fractal::make_cantor_like(a.d, a.target_dim, a.n_per_axis);
    const double sim_dim = fractal::similarity_dimension(ifs);
    const auto samples = fractal::chaos_game_sample(ifs, a.n, a.burn_in,
                                                    haar::RngSeed{a.seed, 0});
    io::write_sample_set_file(a.out, samples);
    std::string threshold_text = "n/a (requires d >= 2, k >= 3)";
    if (a.d >= 2 && a.k >= 3) {
        const Rational s = geom::threshold(a.d, a.k);
        threshold_text = s.str() + " (~" + fmt(s.value()) + ")";
    }
    std::cout << "similarity_dimension=" << fmt(sim_dim) << " threshold(d=" << a.d
              << ",k=" << a.k << ")=" << threshold_text << "\n"
              << "wrote " << a.n << " points to " << a.out << "\n";
    return 0;
}

int run_dist(const std::string& file_x, const std::string& file_y) {
    const auto x = load_single_configuration(file_x);
    const auto y = [&] {
        const auto cfg = load_single_configuration(file_y);
        if (cfg.d() != x.d() || cfg.k() != x.k())
            throw std::invalid_argument(file_y + ": shape mismatch (expected k=" +
                                        std::to_string(x.k()) + ", d=" +
                                        std::to_string(x.d()) + ")");
        return cfg;
    }();
    const auto [motion, dist] = geom::optimal_alignment(x, y);
    std::cout << "distance=" << fmt(dist) << "\n";
    std::cout << "rotation=";
    const auto& rot = motion.rotation.entries();
    for (int i = 0; i < rot.rows(); ++i) {
        std::cout << (i ? "; " : "[");
        for (int j = 0; j < rot.cols(); ++j) std::cout << (j ? " " : "") << fmt(rot(i, j));
    }
    std::cout << "]\ntranslation=[";
    for (int i = 0; i < motion.translation.size(); ++i)
        std::cout << (i ? " " : "") << fmt(motion.translation(i));
    std::cout << "]\n";
    return 0;
}

struct SweepArgs {
    std::string samples;
    int k = 3;
    std::string eps;
    std::uint64_t n_pairs = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_sweep(const SweepArgs& a) {
    const auto samples = io::read_sample_set_file(a.samples);
    const auto report = mc::energy_sweep(samples, a.k, parse_eps_list(a.eps), a.n_pairs,
                                         haar::RngSeed{a.seed, 0});
    write_text_file(a.out, mc::sweep_report_csv(report));
    if (report.slope) {
        std::cout << "slope=" << fmt(report.slope->slope) << " slope_stderr="
                  << fmt(report.slope->std_error) << "\n";
    } else {
        std::cout << "slope=NA (" << report.slope_reason << ")\n";
    }
    const Rational s = geom::threshold(report.d, a.k);
    std::cout << "threshold(d=" << report.d << ",k=" << a.k << ")=" << s.str() << " (~"
              << fmt(s.value()) << "); flat F(eps) is the bounded-energy regime\n";
    return 0;
}

struct EpssetArgs {
    std::string z_file;
    std::string y_file;
    double eps = 0.05;
    double c_m = -1.0;  // negative means the 2 + 2|y| default
    int n_rho = 10000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_epsset(const EpssetArgs& a) {
    const auto z = load_single_configuration(a.z_file);
    const auto y = load_single_configuration(a.y_file);
    const double c_m = a.c_m > 0.0 ? a.c_m : mc::default_c_m(y.tuple_norm());
    const auto est = mc::epsset_haar_measure(z, y, a.eps, c_m, a.n_rho,
                                             haar::RngSeed{a.seed, 0});
    json j;
    j["command"] = "epsset";
    j["inputs"] = {{"z", a.z_file},      {"y", a.y_file},   {"eps", a.eps},
                   {"c_m", c_m},         {"n_rho", a.n_rho}, {"seed", a.seed},
                   {"d", z.d()},         {"k", z.k()}};
    j["estimate"] = estimate_json(est);
    j["lower_bound_eps_pow"] = std::pow(a.eps, z.d() * (z.d() - 1) / 2.0);
    write_text_file(a.out, j.dump(2) + "\n");
    std::cout << "epsset measure=" << fmt(est.value) << " (std_error=" << fmt(est.std_error)
              << ")\n";
    return 0;
}

struct RieszArgs {
    std::string samples;
    double s = 0.5;
    std::uint64_t n_pairs = 100000;
    double cutoff = -1.0;  // negative means 1e-6 * diameter
    std::uint64_t seed = 0;
    std::string out;
};

int run_riesz(const RieszArgs& a) {
    const auto samples = io::read_sample_set_file(a.samples);
    const Eigen::VectorXd span = samples.points.rowwise().maxCoeff() -
                                 samples.points.rowwise().minCoeff();
    const double diameter = span.norm();
    const double cutoff = a.cutoff > 0.0 ? a.cutoff : 1e-6 * (diameter > 0 ? diameter : 1.0);
    const auto est =
        mc::riesz_energy(samples, a.s, a.n_pairs, cutoff, haar::RngSeed{a.seed, 0});
    json j;
    j["command"] = "riesz";
    j["inputs"] = {{"samples", a.samples}, {"s", a.s},       {"n_pairs", a.n_pairs},
                   {"cutoff", cutoff},     {"seed", a.seed}, {"d", samples.d()},
                   {"n", samples.n()}};
    j["estimate"] = estimate_json(est);
    write_text_file(a.out, j.dump(2) + "\n");
    std::cout << "riesz_energy=" << fmt(est.value) << " (std_error=" << fmt(est.std_error)
              << ")\n";
    return 0;
}

struct HaarcheckArgs {
    int d = 2;
    int n = 10000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_haarcheck(const HaarcheckArgs& a) {
    haar::SplitRng rng(haar::RngSeed{a.seed, 0});
    haar::SplitRng rng_b(haar::RngSeed{a.seed, 1});

    // Fixed rotation in the (0,1) plane for the invariance comparison.
    Eigen::MatrixXd qfix = Eigen::MatrixXd::Identity(a.d, a.d);
    if (a.d >= 2) {
        const double phi = 1.0;
        qfix(0, 0) = std::cos(phi);
        qfix(0, 1) = -std::sin(phi);
        qfix(1, 0) = std::sin(phi);
        qfix(1, 1) = std::cos(phi);
    }

    double max_residual = 0.0;
    std::uint64_t det_plus = 0;
    Eigen::VectorXd col_mean = Eigen::VectorXd::Zero(a.d);
    Eigen::VectorXd col_sq = Eigen::VectorXd::Zero(a.d);
    std::vector<double> rotated_entry, plain_entry;
    rotated_entry.reserve(static_cast<std::size_t>(a.n));
    plain_entry.reserve(static_cast<std::size_t>(a.n));

    for (int i = 0; i < a.n; ++i) {
        const auto rho = haar::sample_orthogonal(a.d, rng);
        const auto& q = rho.entries();
        max_residual = std::max(
            max_residual, (q.transpose() * q - Eigen::MatrixXd::Identity(a.d, a.d))
                              .cwiseAbs()
                              .maxCoeff());
        if (rho.det_sign() > 0) ++det_plus;
        col_mean += q.col(0);
        col_sq += q.col(0).cwiseAbs2();
        rotated_entry.push_back((qfix * q)(0, 0));
        plain_entry.push_back(haar::sample_orthogonal(a.d, rng_b).entries()(0, 0));
    }
    col_mean /= a.n;
    col_sq /= a.n;

    const double det_plus_freq = static_cast<double>(det_plus) / a.n;
    const double ks = stats::ks_two_sample(rotated_entry, plain_entry);
    const double ks_crit = stats::ks_critical(
        0.01, static_cast<std::size_t>(a.n), static_cast<std::size_t>(a.n));
    // Moment tolerances at 3 standard errors under the uniform frame law:
    // Var(v) = 1/d and Var(v^2) = 3/(d(d+2)) - 1/d^2 for a unit-sphere column.
    const double se_mean = std::sqrt(1.0 / a.d / a.n);
    const double var_sq = 3.0 / (static_cast<double>(a.d) * (a.d + 2.0)) -
                          1.0 / (static_cast<double>(a.d) * a.d);
    const double se_sq = std::sqrt(var_sq / a.n);

    bool moments_ok = true;
    for (int i = 0; i < a.d; ++i) {
        if (std::abs(col_mean(i)) > 3.0 * se_mean) moments_ok = false;
        if (std::abs(col_sq(i) - 1.0 / a.d) > 3.0 * se_sq) moments_ok = false;
    }

    json j;
    j["command"] = "haarcheck";
    j["inputs"] = {{"d", a.d}, {"n", a.n}, {"seed", a.seed}};
    json rep;
    rep["orthogonality_residual_max"] = max_residual;
    rep["det_plus_frequency"] = det_plus_freq;
    rep["det_minus_frequency"] = 1.0 - det_plus_freq;
    rep["first_column_mean"] = std::vector<double>(col_mean.data(), col_mean.data() + a.d);
    rep["first_column_second_moment"] =
        std::vector<double>(col_sq.data(), col_sq.data() + a.d);
    rep["ks_statistic"] = ks;
    rep["ks_critical_1pct"] = ks_crit;
    json checks;
    checks["orthogonality"] = max_residual < 1e-12;
    checks["det_balance"] = det_plus_freq >= 0.48 && det_plus_freq <= 0.52;
    checks["first_column_moments"] = moments_ok;
    checks["ks_invariance"] = ks < ks_crit;
    rep["checks"] = checks;
    j["report"] = rep;
    write_text_file(a.out, j.dump(2) + "\n");

    const bool all_ok = checks["orthogonality"].get<bool>() &&
                        checks["det_balance"].get<bool>() &&
                        checks["first_column_moments"].get<bool>() &&
                        checks["ks_invariance"].get<bool>();
    std::cout << "haarcheck d=" << a.d << " n=" << a.n << " all_checks="
              << (all_ok ? "pass" : "FAIL") << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"configuration-space experiments on self-similar measures"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "sample a self-similar measure to a file");
    cmd_gen->add_option("--d", gen.d, "ambient dimension")->required();
    cmd_gen->add_option("--target-dim", gen.target_dim, "similarity dimension")->required();
    cmd_gen->add_option("--n-per-axis", gen.n_per_axis, "contractions per axis")->required();
    cmd_gen->add_option("--n", gen.n, "number of sample points")->required();
    cmd_gen->add_option("--k", gen.k, "tuple size used for the threshold printout");
    cmd_gen->add_option("--burn-in", gen.burn_in, "chaos-game burn-in");
    cmd_gen->add_option("--seed", gen.seed, "RNG seed")->required();
    cmd_gen->add_option("--out", gen.out, "output sample file")->required();

    std::string dist_x, dist_y;
    auto* cmd_dist = app.add_subcommand("dist", "quotient distance between two configurations");
    cmd_dist->add_option("file_x", dist_x, "first configuration file")->required();
    cmd_dist->add_option("file_y", dist_y, "second configuration file")->required();

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "correlation sweep over an epsilon grid");
    cmd_sweep->add_option("--samples", sweep.samples, "sample file")->required();
    cmd_sweep->add_option("--k", sweep.k, "points per configuration")->required();
    cmd_sweep->add_option("--eps", sweep.eps, "comma-separated decreasing epsilons")->required();
    cmd_sweep->add_option("--n-pairs", sweep.n_pairs, "Monte Carlo pairs per epsilon");
    cmd_sweep->add_option("--seed", sweep.seed, "RNG seed")->required();
    cmd_sweep->add_option("--out", sweep.out, "output CSV")->required();

    EpssetArgs epsset;
    auto* cmd_epsset = app.add_subcommand("epsset", "Haar measure of the rotation window");
    cmd_epsset->add_option("--z", epsset.z_file, "configuration file z")->required();
    cmd_epsset->add_option("--y", epsset.y_file, "configuration file y")->required();
    cmd_epsset->add_option("--eps", epsset.eps, "epsilon")->required();
    cmd_epsset->add_option("--cm", epsset.c_m, "window constant (default 2 + 2|y|)");
    cmd_epsset->add_option("--n-rho", epsset.n_rho, "Haar samples");
    cmd_epsset->add_option("--seed", epsset.seed, "RNG seed")->required();
    cmd_epsset->add_option("--out", epsset.out, "output JSON")->required();

    RieszArgs riesz;
    auto* cmd_riesz = app.add_subcommand("riesz", "Riesz s-energy of a sample measure");
    cmd_riesz->add_option("--samples", riesz.samples, "sample file")->required();
    cmd_riesz->add_option("--s", riesz.s, "energy exponent")->required();
    cmd_riesz->add_option("--n-pairs", riesz.n_pairs, "Monte Carlo pairs");
    cmd_riesz->add_option("--cutoff", riesz.cutoff, "distance clamp (default 1e-6 * diameter)");
    cmd_riesz->add_option("--seed", riesz.seed, "RNG seed")->required();
    cmd_riesz->add_option("--out", riesz.out, "output JSON")->required();

    HaarcheckArgs haarcheck;
    auto* cmd_haar = app.add_subcommand("haarcheck", "statistics of the O(d) sampler");
    cmd_haar->add_option("--d", haarcheck.d, "matrix dimension")->required();
    cmd_haar->add_option("--n", haarcheck.n, "sample count");
    cmd_haar->add_option("--seed", haarcheck.seed, "RNG seed")->required();
    cmd_haar->add_option("--out", haarcheck.out, "output JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_gen) return run_gen(gen);
        if (*cmd_dist) return run_dist(dist_x, dist_y);
        if (*cmd_sweep) return run_sweep(sweep);
        if (*cmd_epsset) return run_epsset(epsset);
        if (*cmd_riesz) return run_riesz(riesz);
        if (*cmd_haar) return run_haarcheck(haarcheck);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
