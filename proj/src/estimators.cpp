#include "confract/estimators.hpp"

#include "confract/geometry.hpp"
#include "confract/haar.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace confract::mc {

namespace {

constexpr double kBoundaryMargin = 1e-8;

/// Runs fn(chunk) for chunk = 0..substreams-1, each into its own slot, so
/// the merged result does not depend on scheduling.
template <typename Partial, typename Fn>
std::vector<Partial> run_chunks(int substreams, Fn&& fn) {
    if (substreams < 1) throw std::invalid_argument("substreams must be >= 1");
    std::vector<Partial> results(static_cast<std::size_t>(substreams));
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(substreams));
    std::atomic<int> next{0};
    const auto work = [&] {
        for (int c = next.fetch_add(1); c < substreams; c = next.fetch_add(1))
            results[static_cast<std::size_t>(c)] = fn(c);
    };
    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) threads.emplace_back(work);
    work();
    for (auto& th : threads) th.join();
    return results;
}

std::uint64_t chunk_draws(std::uint64_t total, int substreams, int chunk) {
    const std::uint64_t base = total / static_cast<std::uint64_t>(substreams);
    const std::uint64_t extra = total % static_cast<std::uint64_t>(substreams);
    return base + (static_cast<std::uint64_t>(chunk) < extra ? 1 : 0);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct IndicatorPartial {
    std::uint64_t hits = 0;
    std::uint64_t boundary = 0;
};

Estimate indicator_estimate(std::uint64_t hits, std::uint64_t boundary, std::uint64_t n,
                            double scale, haar::RngSeed seed) {
    Estimate est;
    est.n_samples = n;
    est.seed = seed;
    est.hits = hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    est.value = scale * p;
    est.std_error = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    if (hits == 0)
        est.flag = "zero hits; value is a lower-confidence observation, increase n_pairs";
    if (boundary > 0) {
        if (!est.flag.empty()) est.flag += "; ";
        est.flag += std::to_string(boundary) + " hit(s) within 1e-8 of the threshold";
    }
    return est;
}

/// Draw a k-tuple from the sample columns into out (d x k), with replacement.
inline void draw_tuple(const Eigen::MatrixXd& points, int k, haar::SplitRng& rng,
                       Eigen::MatrixXd& out) {
    const std::size_t n = static_cast<std::size_t>(points.cols());
    for (int j = 0; j < k; ++j) out.col(j) = points.col(static_cast<long>(rng.uniform_index(n)));
}

}  // namespace

Estimate riesz_energy(const fractal::SampleSet& samples, double s, std::uint64_t n_pairs,
                      double cutoff, haar::RngSeed seed, int substreams) {
    if (!(s > 0.0)) throw std::invalid_argument("riesz_energy: s must be positive");
    if (!(cutoff > 0.0)) throw std::invalid_argument("riesz_energy: cutoff must be positive");
    if (n_pairs < 1000) throw std::invalid_argument("riesz_energy: n_pairs must be >= 1000");
    if (samples.n() < 2) throw std::invalid_argument("riesz_energy: need at least 2 points");

    struct Partial {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    const auto partials = run_chunks<Partial>(substreams, [&](int chunk) {
        haar::SplitRng rng(seed.substream(static_cast<std::uint64_t>(chunk)));
        const std::uint64_t draws = chunk_draws(n_pairs, substreams, chunk);
        const std::size_t n = static_cast<std::size_t>(samples.n());
        Partial p;
        for (std::uint64_t i = 0; i < draws; ++i) {
            const std::size_t a = rng.uniform_index(n);
            std::size_t b = rng.uniform_index(n);
            while (b == a) b = rng.uniform_index(n);
            const double dist = (samples.points.col(static_cast<long>(a)) -
                                 samples.points.col(static_cast<long>(b)))
                                    .norm();
            const double term = std::pow(std::max(dist, cutoff), -s);
            p.sum += term;
            p.sum_sq += term * term;
        }
        return p;
    });

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : partials) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(n_pairs);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));

    Estimate est;
    est.value = mean;
    est.std_error = std::sqrt(var / n);
    est.n_samples = n_pairs;
    est.seed = seed;
    if (s >= samples.d())
        est.flag = "s >= ambient dimension: the energy is infinite for every measure on R^d";
    return est;
}

Estimate config_correlation(const fractal::SampleSet& samples, int k, double epsilon,
                            std::uint64_t n_pairs, haar::RngSeed seed, int substreams) {
    const int d = samples.d();
    const int m = geom::config_dim(d, k);  // also enforces k >= d+1
    if (!(epsilon > 0.0)) throw std::invalid_argument("config_correlation: epsilon must be > 0");
    if (samples.n() < 2 * k)
        throw std::invalid_argument("config_correlation: sample set needs at least 2k points");
    if (n_pairs < 1) throw std::invalid_argument("config_correlation: n_pairs must be >= 1");

    const auto partials = run_chunks<IndicatorPartial>(substreams, [&](int chunk) {
        haar::SplitRng rng(seed.substream(static_cast<std::uint64_t>(chunk)));
        const std::uint64_t draws = chunk_draws(n_pairs, substreams, chunk);
        Eigen::MatrixXd y(d, k), z(d, k);
        Eigen::VectorXd mean_y(d), mean_z(d);
        IndicatorPartial p;
        for (std::uint64_t i = 0; i < draws; ++i) {
            draw_tuple(samples.points, k, rng, y);
            draw_tuple(samples.points, k, rng, z);
            mean_y = y.rowwise().mean();
            mean_z = z.rowwise().mean();
            y.colwise() -= mean_y;
            z.colwise() -= mean_z;
            const double dist = geom::detail::centered_procrustes_distance(y, z);
            if (dist < epsilon) ++p.hits;
            if (std::abs(dist - epsilon) <= kBoundaryMargin) ++p.boundary;
        }
        return p;
    });

    std::uint64_t hits = 0, boundary = 0;
    for (const auto& p : partials) {
        hits += p.hits;
        boundary += p.boundary;
    }
    return indicator_estimate(hits, boundary, n_pairs, std::pow(epsilon, -m), seed);
}

EnergySweepReport energy_sweep(const fractal::SampleSet& samples, int k,
                               std::vector<double> epsilons, std::uint64_t n_pairs,
                               haar::RngSeed seed, int substreams) {
    if (epsilons.empty()) throw std::invalid_argument("energy_sweep: empty epsilon grid");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0))
            throw std::invalid_argument("energy_sweep: epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("energy_sweep: epsilons must be strictly decreasing");
    }

    EnergySweepReport report;
    report.d = samples.d();
    report.k = k;
    report.m = geom::config_dim(samples.d(), k);
    report.seed = seed;
    report.n_pairs = n_pairs;
    report.epsilons = epsilons;

    for (std::size_t i = 0; i < epsilons.size(); ++i)
        report.estimates.push_back(config_correlation(
            samples, k, epsilons[i], n_pairs, seed.substream(i), substreams));

    std::vector<double> log_eps, log_val;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (report.estimates[i].hits == 0) continue;
        log_eps.push_back(std::log(epsilons[i]));
        log_val.push_back(std::log(report.estimates[i].value));
    }
    if (log_eps.size() < 3) {
        report.slope_reason = "fewer than 3 epsilon points with hits (" +
                              std::to_string(log_eps.size()) + " usable)";
    } else {
        report.slope = stats::least_squares_line(log_eps, log_val);
        if (!report.slope) report.slope_reason = "degenerate epsilon grid";
    }
    return report;
}

Estimate semifinal_estimate(const fractal::SampleSet& samples, int k, double epsilon,
                            double c_prime, int n_rho, std::uint64_t n_pairs,
                            haar::RngSeed seed, int substreams) {
    const int d = samples.d();
    if (k < 2) throw std::invalid_argument("semifinal_estimate: k must be >= 2");
    if (!(epsilon > 0.0)) throw std::invalid_argument("semifinal_estimate: epsilon must be > 0");
    if (!(c_prime > 0.0)) throw std::invalid_argument("semifinal_estimate: c_prime must be > 0");
    if (n_rho < 1) throw std::invalid_argument("semifinal_estimate: n_rho must be >= 1");
    if (samples.n() < 2 * k)
        throw std::invalid_argument("semifinal_estimate: sample set needs at least 2k points");

    const double threshold = c_prime * epsilon;
    const std::uint64_t total = static_cast<std::uint64_t>(n_rho) * n_pairs;
    substreams = std::min(substreams, n_rho);

    const auto partials = run_chunks<IndicatorPartial>(substreams, [&](int chunk) {
        haar::SplitRng rng(seed.substream(static_cast<std::uint64_t>(chunk)));
        const std::uint64_t rho_count =
            chunk_draws(static_cast<std::uint64_t>(n_rho), substreams, chunk);
        Eigen::MatrixXd y(d, k), z(d, k);
        IndicatorPartial p;
        for (std::uint64_t r = 0; r < rho_count; ++r) {
            const geom::OrthogonalMatrix rho = haar::sample_orthogonal(d, rng);
            const Eigen::MatrixXd& rot = rho.entries();
            for (std::uint64_t i = 0; i < n_pairs; ++i) {
                draw_tuple(samples.points, k, rng, y);
                draw_tuple(samples.points, k, rng, z);
                bool hit = true;
                bool near_boundary = false;
                for (int j = 1; j < k; ++j) {
                    const double gap =
                        ((z.col(0) - z.col(j)) - rot * (y.col(0) - y.col(j))).norm();
                    if (std::abs(gap - threshold) <= kBoundaryMargin) near_boundary = true;
                    if (!(gap < threshold)) {
                        hit = false;
                        break;
                    }
                }
                if (hit) ++p.hits;
                if (near_boundary) ++p.boundary;
            }
        }
        return p;
    });

    std::uint64_t hits = 0, boundary = 0;
    for (const auto& p : partials) {
        hits += p.hits;
        boundary += p.boundary;
    }
    const double scale = std::pow(epsilon, -static_cast<double>(d) * (k - 1));
    return indicator_estimate(hits, boundary, total, scale, seed);
}

double nu_rho_density_at(const fractal::SampleSet& samples, const geom::OrthogonalMatrix& rho,
                         const Eigen::VectorXd& u, double bandwidth) {
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("nu_rho_density_at: bandwidth must be > 0");
    const int d = samples.d();
    if (rho.d() != d || u.size() != d)
        throw std::invalid_argument("nu_rho_density_at: dimension mismatch");
    const long n = samples.points.cols();
    if (n < 2) throw std::invalid_argument("nu_rho_density_at: need at least 2 points");

    // Rotate once; the pair scan then only subtracts columns.
    const Eigen::MatrixXd rotated = rho.entries() * samples.points;
    std::uint64_t inside = 0;
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            if ((u - (samples.points.col(i) - rotated.col(j))).norm() < bandwidth) ++inside;
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    const double kernel_volume = stats::unit_ball_volume(d) * std::pow(bandwidth, d);
    return static_cast<double>(inside) / (pairs * kernel_volume);
}

Estimate nu_rho_moment(const fractal::SampleSet& samples, int k, int n_rho, double bandwidth,
                       int n_eval, haar::RngSeed seed) {
    if (k < 2) throw std::invalid_argument("nu_rho_moment: k must be >= 2");
    if (n_rho < 1 || n_eval < 1)
        throw std::invalid_argument("nu_rho_moment: n_rho and n_eval must be >= 1");
    const int d = samples.d();
    const std::size_t n = static_cast<std::size_t>(samples.n());
    if (n < 2) throw std::invalid_argument("nu_rho_moment: need at least 2 points");

    haar::SplitRng rng(seed);
    double sum = 0.0, sum_sq = 0.0, half_sum = 0.0;
    for (int r = 0; r < n_rho; ++r) {
        const geom::OrthogonalMatrix rho = haar::sample_orthogonal(d, rng);
        for (int e = 0; e < n_eval; ++e) {
            const std::size_t a = rng.uniform_index(n);
            std::size_t b = rng.uniform_index(n);
            while (b == a) b = rng.uniform_index(n);
            const Eigen::VectorXd u = samples.points.col(static_cast<long>(a)) -
                                      rho.entries() * samples.points.col(static_cast<long>(b));
            const double f = nu_rho_density_at(samples, rho, u, bandwidth);
            const double term = std::pow(f, k - 1);
            sum += term;
            sum_sq += term * term;
            half_sum += std::pow(nu_rho_density_at(samples, rho, u, 0.5 * bandwidth), k - 1);
        }
    }

    const double total = static_cast<double>(n_rho) * static_cast<double>(n_eval);
    Estimate est;
    est.value = sum / total;
    const double var = std::max(0.0, (sum_sq - total * est.value * est.value) / (total - 1.0));
    est.std_error = std::sqrt(var / total);
    est.n_samples = static_cast<std::uint64_t>(total);
    est.seed = seed;
    est.flag = "half_bandwidth_value=" + format_double(half_sum / total);
    return est;
}

Estimate epsset_haar_measure(const geom::Configuration& z, const geom::Configuration& y,
                             double epsilon, double c_m, int n_rho, haar::RngSeed seed,
                             int substreams) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsset_haar_measure: epsilon must be > 0");
    if (!(c_m > 0.0)) throw std::invalid_argument("epsset_haar_measure: c_m must be > 0");
    if (n_rho < 1) throw std::invalid_argument("epsset_haar_measure: n_rho must be >= 1");
    const double dist = geom::procrustes_distance(z, y);
    if (!(dist < epsilon))
        throw std::invalid_argument(
            "epsset_haar_measure: hypothesis d(z, y) < epsilon fails (d = " +
            format_double(dist) + ")");

    const int d = z.d();
    const int k = z.k();
    const double threshold = c_m * epsilon;
    const Eigen::MatrixXd zdiff = -geom::center(z, geom::Centering::FirstPoint).diffs();
    const Eigen::MatrixXd ydiff = -geom::center(y, geom::Centering::FirstPoint).diffs();

    substreams = std::min(substreams, n_rho);
    const auto partials = run_chunks<IndicatorPartial>(substreams, [&](int chunk) {
        haar::SplitRng rng(seed.substream(static_cast<std::uint64_t>(chunk)));
        const std::uint64_t draws =
            chunk_draws(static_cast<std::uint64_t>(n_rho), substreams, chunk);
        IndicatorPartial p;
        for (std::uint64_t i = 0; i < draws; ++i) {
            const geom::OrthogonalMatrix rho = haar::sample_orthogonal(d, rng);
            bool hit = true;
            for (int j = 0; j < k - 1; ++j) {
                if (!((zdiff.col(j) - rho.entries() * ydiff.col(j)).norm() < threshold)) {
                    hit = false;
                    break;
                }
            }
            if (hit) ++p.hits;
        }
        return p;
    });

    std::uint64_t hits = 0;
    for (const auto& p : partials) hits += p.hits;
    return indicator_estimate(hits, 0, static_cast<std::uint64_t>(n_rho), 1.0, seed);
}

std::string sweep_report_csv(const EnergySweepReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "# d=%d k=%d m=%d seed=%" PRIu64 " stream=%" PRIu64
                                      " n_pairs=%" PRIu64 "\n",
                  report.d, report.k, report.m, report.seed.seed, report.seed.stream,
                  report.n_pairs);
    out += line;
    if (report.slope) {
        std::snprintf(line, sizeof(line), "# slope=%.17g slope_stderr=%.17g\n",
                      report.slope->slope, report.slope->std_error);
    } else {
        std::snprintf(line, sizeof(line), "# slope=NA slope_stderr=NA reason=%s\n",
                      report.slope_reason.c_str());
    }
    out += line;
    out += "epsilon,value,std_error,n_pairs,hits\n";
    for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
        const Estimate& est = report.estimates[i];
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%" PRIu64 ",%" PRIu64 "\n",
                      report.epsilons[i], est.value, est.std_error, est.n_samples, est.hits);
        out += line;
    }
    return out;
}

}  // namespace confract::mc
