#pragma once

#include <optional>
#include <vector>

namespace confract::stats {

struct SlopeFit {
    double slope = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
};

/// Unweighted least-squares line through (x, y) pairs; needs >= 3 points.
std::optional<SlopeFit> least_squares_line(const std::vector<double>& x,
                                           const std::vector<double>& y);

/// Two-sample Kolmogorov-Smirnov statistic, sup |F1 - F2|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Critical KS value c(alpha) * sqrt((n+m)/(n*m)); alpha = 0.01 gives c = 1.628.
double ks_critical(double alpha, std::size_t n, std::size_t m);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace confract::stats
