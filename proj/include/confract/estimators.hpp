#pragma once

#include "confract/configuration.hpp"
#include "confract/fractal.hpp"
#include "confract/rng.hpp"
#include "confract/stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace confract::mc {

/// Default number of independent substreams an estimator partitions its
/// draws across. Results are bit-identical for a fixed (seed, substreams)
/// pair regardless of thread count or execution order.
inline constexpr int kDefaultSubstreams = 64;

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    haar::RngSeed seed;
    std::uint64_t hits = 0;  // meaningful for indicator-based estimators
    std::string flag;        // empty when nothing to report
};

/// F(eps) estimates across a decreasing epsilon grid, with the fitted
/// log-log slope when at least three entries have hits.
struct EnergySweepReport {
    int d = 0;
    int k = 0;
    int m = 0;
    haar::RngSeed seed;
    std::uint64_t n_pairs = 0;
    std::vector<double> epsilons;
    std::vector<Estimate> estimates;
    std::optional<stats::SlopeFit> slope;
    std::string slope_reason;  // set when slope is undefined
};

/// Monte Carlo Riesz s-energy of the sample measure: mean of
/// max(|X - Y|, cutoff)^(-s) over pairs with distinct indices.
Estimate riesz_energy(const fractal::SampleSet& samples, double s, std::uint64_t n_pairs,
                      double cutoff, haar::RngSeed seed, int substreams = kDefaultSubstreams);

/// eps^(-m) * P[d(Y, Z) < eps] where Y, Z are independent k-tuples drawn
/// from the sample set and d is the Procrustes quotient metric;
/// m = config_dim(d, k).
Estimate config_correlation(const fractal::SampleSet& samples, int k, double epsilon,
                            std::uint64_t n_pairs, haar::RngSeed seed,
                            int substreams = kDefaultSubstreams);

/// config_correlation across an epsilon grid plus a log-log slope fit.
EnergySweepReport energy_sweep(const fractal::SampleSet& samples, int k,
                               std::vector<double> epsilons, std::uint64_t n_pairs,
                               haar::RngSeed seed, int substreams = kDefaultSubstreams);

/// Rotation-smeared bound: eps^(-d(k-1)) times the Haar-average probability
/// that all k-1 first-point difference vectors of Y and Z match within
/// c_prime * eps after rotating Y's by rho.
Estimate semifinal_estimate(const fractal::SampleSet& samples, int k, double epsilon,
                            double c_prime, int n_rho, std::uint64_t n_pairs,
                            haar::RngSeed seed, int substreams = kDefaultSubstreams);

/// Box-kernel density of the difference measure (law of z0 - rho*y0 with
/// independent draws from the sample measure) at the point u.
double nu_rho_density_at(const fractal::SampleSet& samples, const geom::OrthogonalMatrix& rho,
                         const Eigen::VectorXd& u, double bandwidth);

/// Haar-averaged k-th moment of the difference measure's density, via
/// E_{u ~ nu_rho}[f^(k-1)(u)]. The flag records the value recomputed at
/// half bandwidth as a finiteness diagnostic.
Estimate nu_rho_moment(const fractal::SampleSet& samples, int k, int n_rho, double bandwidth,
                       int n_eval, haar::RngSeed seed);

/// Haar measure of {rho : |(z1-zj) - rho(y1-yj)| < c_m * eps for all j},
/// estimated by Monte Carlo. Requires the hypothesis d(z, y) < eps.
Estimate epsset_haar_measure(const geom::Configuration& z, const geom::Configuration& y,
                             double epsilon, double c_m, int n_rho, haar::RngSeed seed,
                             int substreams = kDefaultSubstreams);

/// Default calibration constant 2 + 2*norm_bound, from the alignment bound
/// 2*eps + 2*C*|y|*eps with the Frobenius metric's C = 1.
inline double default_c_m(double norm_bound) { return 2.0 + 2.0 * norm_bound; }

/// CSV serialization of a sweep report (header comments carry d, k, m, seed,
/// slope); parse-free round-tripping is not needed, the format is for plots
/// and diffs.
std::string sweep_report_csv(const EnergySweepReport& report);

}  // namespace confract::mc
