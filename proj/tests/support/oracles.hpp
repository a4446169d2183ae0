#pragma once

// Independent reference computations used to pin expected values in tests.
// Everything here deliberately avoids the library's closed-form paths.

#include "confract/configuration.hpp"
#include "confract/fractal.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

/// Brute-force Procrustes distance in d = 2: centroid translation, then an
/// exhaustive scan of rotation angles in both reflection classes.
inline double grid_procrustes_2d(const confract::geom::Configuration& x,
                                 const confract::geom::Configuration& y,
                                 int angle_steps = 3600) {
    const Eigen::MatrixXd xc = x.points().colwise() - x.points().rowwise().mean().eval();
    const Eigen::MatrixXd yc = y.points().colwise() - y.points().rowwise().mean().eval();
    double best = std::numeric_limits<double>::infinity();
    for (int reflect = 0; reflect < 2; ++reflect) {
        for (int a = 0; a < angle_steps; ++a) {
            const double theta = 2.0 * M_PI * a / angle_steps;
            Eigen::Matrix2d rot;
            rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
            if (reflect) rot.col(1) = -rot.col(1);
            best = std::min(best, (xc - rot * yc).norm());
        }
    }
    return best;
}

/// Box-counting dimension of a point cloud: least-squares slope of
/// log(occupied boxes) against log(1/h) for box sizes h = 2^-lo .. 2^-hi
/// relative to the cloud's bounding cube.
inline double box_counting_dimension(const Eigen::MatrixXd& points, int lo_exp = 3,
                                     int hi_exp = 8) {
    const int d = static_cast<int>(points.rows());
    const Eigen::VectorXd mins = points.rowwise().minCoeff();
    const Eigen::VectorXd maxs = points.rowwise().maxCoeff();
    const double extent = (maxs - mins).maxCoeff();

    std::vector<double> log_inv_h, log_count;
    for (int e = lo_exp; e <= hi_exp; ++e) {
        const double h = std::ldexp(extent, -e) * (1.0 + 1e-12);
        std::map<std::vector<std::int64_t>, bool> occupied;
        std::vector<std::int64_t> cell(static_cast<std::size_t>(d));
        for (long i = 0; i < points.cols(); ++i) {
            for (int a = 0; a < d; ++a)
                cell[static_cast<std::size_t>(a)] =
                    static_cast<std::int64_t>(std::floor((points(a, i) - mins(a)) / h));
            occupied[cell] = true;
        }
        log_inv_h.push_back(e * std::log(2.0));
        log_count.push_back(std::log(static_cast<double>(occupied.size())));
    }

    const std::size_t n = log_inv_h.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += log_inv_h[i];
        my += log_count[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (log_inv_h[i] - mx) * (log_inv_h[i] - mx);
        sxy += (log_inv_h[i] - mx) * (log_count[i] - my);
    }
    return sxy / sxx;
}

/// Cross-cell part of the Riesz s-energy at one subdivision depth: the sum
/// over distinct depth-level cells of mass^2 * distance^-s, with the
/// distance taken between centers and widened/narrowed by the cell radii
/// for a lower/upper value.
struct EnergyBracket {
    double lower;
    double upper;
};

inline EnergyBracket cell_cross_energy(const confract::fractal::SimilarityIFS& ifs, double s,
                                       int depth) {
    const auto cells = confract::fractal::deterministic_cells(ifs, depth);
    const double mass = 1.0 / static_cast<double>(cells.size());
    double lower = 0.0, upper = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (i == j) continue;
            const double center_dist = (cells[i].center - cells[j].center).norm();
            const double pad = cells[i].radius + cells[j].radius;
            const double near = std::max(center_dist - pad, 1e-30);
            const double far = center_dist + pad;
            lower += mass * mass * std::pow(far, -s);
            upper += mass * mass * std::pow(near, -s);
        }
    }
    return {lower, upper};
}

/// Riesz s-energy bracket for an equal-ratio, equal-weight IFS with s below
/// the similarity dimension. Same-cell pairs at the chosen depth are resolved
/// exactly through the self-similar recursion
///   I = C_L + (N r^s)^-L I  =>  I = C_L / (1 - q^L),  q = r^-s / N.
inline EnergyBracket cantor_riesz_bracket(const confract::fractal::SimilarityIFS& ifs, double s,
                                          int depth) {
    const double ratio = ifs.maps()[0].ratio;
    const double n_maps = static_cast<double>(ifs.map_count());
    const double q = std::pow(ratio, -s) / n_maps;
    const double q_depth = std::pow(q, depth);
    if (q >= 1.0) throw std::invalid_argument("cantor_riesz_bracket: s above the dimension");
    const EnergyBracket cross = cell_cross_energy(ifs, s, depth);
    return {cross.lower / (1.0 - q_depth), cross.upper / (1.0 - q_depth)};
}

/// Dense angle-grid evaluation of the rotation-window indicator set in O(2):
/// fraction of the group where every difference vector of z stays within
/// threshold of the rotated difference vector of y, both components scanned.
inline double grid_epsset_measure_2d(const confract::geom::Configuration& z,
                                     const confract::geom::Configuration& y, double threshold,
                                     int angle_steps = 7200) {
    const Eigen::MatrixXd zd =
        z.points().rightCols(z.k() - 1).colwise() - z.points().col(0).eval();
    const Eigen::MatrixXd yd =
        y.points().rightCols(y.k() - 1).colwise() - y.points().col(0).eval();
    std::int64_t inside = 0;
    for (int reflect = 0; reflect < 2; ++reflect) {
        for (int a = 0; a < angle_steps; ++a) {
            const double theta = 2.0 * M_PI * a / angle_steps;
            Eigen::Matrix2d rot;
            rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
            if (reflect) rot.col(1) = -rot.col(1);
            bool hit = true;
            for (long j = 0; j < zd.cols(); ++j) {
                if ((zd.col(j) - rot * yd.col(j)).norm() >= threshold) {
                    hit = false;
                    break;
                }
            }
            if (hit) ++inside;
        }
    }
    return static_cast<double>(inside) / (2.0 * angle_steps);
}

}  // namespace oracle
