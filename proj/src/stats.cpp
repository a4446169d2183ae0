#include "confract/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace confract::stats {

std::optional<SlopeFit> least_squares_line(const std::vector<double>& x,
                                           const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("least_squares_line: size mismatch");
    const std::size_t n = x.size();
    if (n < 3) return std::nullopt;

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;

    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += r * r;
    }
    fit.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    return fit;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double stat = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        stat = std::max(stat, std::abs(static_cast<double>(i) / na -
                                       static_cast<double>(j) / nb));
    }
    return stat;
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    return c * std::sqrt(static_cast<double>(n + m) /
                         (static_cast<double>(n) * static_cast<double>(m)));
}

double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

}  // namespace confract::stats
