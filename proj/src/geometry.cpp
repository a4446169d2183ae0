#include "confract/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace confract::geom {

CenteredConfiguration center(const Configuration& x, Centering convention) {
    if (convention == Centering::FirstPoint) {
        const int k = x.k();
        Eigen::MatrixXd diffs(x.d(), k - 1);
        for (int j = 1; j < k; ++j) diffs.col(j - 1) = x.points().col(j) - x.points().col(0);
        return CenteredConfiguration(std::move(diffs), Centering::FirstPoint);
    }
    Eigen::MatrixXd diffs = x.points().colwise() - x.centroid();
    return CenteredConfiguration(std::move(diffs), Centering::Centroid);
}

namespace detail {

// The expansion |X|^2 + |Y|^2 - 2*sum(sigma) cancels catastrophically when
// the configurations nearly coincide; distances below sqrt(1e-8)*scale are
// recomputed as an explicit aligned residual, which is stable near zero.
static double small_distance_residual(const Eigen::MatrixXd& xc, const Eigen::MatrixXd& yc) {
    const int d = static_cast<int>(xc.rows());
    if (d == 1) {
        return std::min((xc - yc).norm(), (xc + yc).norm());
    }
    if (d == 2) {
        const double m00 = xc.row(0).dot(yc.row(0));
        const double m01 = xc.row(0).dot(yc.row(1));
        const double m10 = xc.row(1).dot(yc.row(0));
        const double m11 = xc.row(1).dot(yc.row(1));
        Eigen::Matrix2d rot = Eigen::Matrix2d::Identity();
        const double h_rot = std::hypot(m00 + m11, m10 - m01);
        if (h_rot > 0.0) {
            const double c = (m00 + m11) / h_rot;
            const double s = (m10 - m01) / h_rot;
            rot << c, -s, s, c;
        }
        Eigen::Matrix2d refl;
        const double h_refl = std::hypot(m00 - m11, m01 + m10);
        if (h_refl > 0.0) {
            const double c = (m00 - m11) / h_refl;
            const double s = (m01 + m10) / h_refl;
            refl << c, s, s, -c;
        } else {
            refl << 1, 0, 0, -1;
        }
        return std::min((xc - rot * yc).norm(), (xc - refl * yc).norm());
    }
    const Eigen::MatrixXd m = xc * yc.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
    return (xc - rot * yc).norm();
}

double centered_procrustes_distance(const Eigen::MatrixXd& xc, const Eigen::MatrixXd& yc) {
    const int d = static_cast<int>(xc.rows());
    const double norms = xc.squaredNorm() + yc.squaredNorm();
    double sigma_sum = 0.0;
    if (d == 1) {
        // O(1) = {+1, -1}: the trace max is |<x, y>|.
        sigma_sum = std::abs((xc.array() * yc.array()).sum());
    } else if (d == 2) {
        // Sum of the two singular values of the 2x2 cross-covariance,
        // sqrt(|M|_F^2 + 2|det M|), avoids an SVD in the hot loops.
        const double m00 = xc.row(0).dot(yc.row(0));
        const double m01 = xc.row(0).dot(yc.row(1));
        const double m10 = xc.row(1).dot(yc.row(0));
        const double m11 = xc.row(1).dot(yc.row(1));
        const double frob2 = m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11;
        const double det = m00 * m11 - m01 * m10;
        sigma_sum = std::sqrt(std::max(0.0, frob2 + 2.0 * std::abs(det)));
    } else if (d == 3) {
        Eigen::Matrix3d m = xc * yc.transpose();
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
        sigma_sum = svd.singularValues().sum();
    } else {
        Eigen::MatrixXd m = xc * yc.transpose();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        sigma_sum = svd.singularValues().sum();
    }
    const double dist2 = norms - 2.0 * sigma_sum;
    if (dist2 > 1e-8 * norms) return std::sqrt(dist2);
    return small_distance_residual(xc, yc);
}

}  // namespace detail

static void require_same_shape(const Configuration& x, const Configuration& y) {
    if (x.d() != y.d() || x.k() != y.k())
        throw std::invalid_argument("configurations must share the same k and d");
}

double procrustes_distance(const Configuration& x, const Configuration& y) {
    require_same_shape(x, y);
    const Eigen::MatrixXd xc = x.points().colwise() - x.centroid();
    const Eigen::MatrixXd yc = y.points().colwise() - y.centroid();
    return detail::centered_procrustes_distance(xc, yc);
}

std::pair<RigidMotion, double> optimal_alignment(const Configuration& x,
                                                 const Configuration& y) {
    require_same_shape(x, y);
    const int d = x.d();
    const Eigen::VectorXd cx = x.centroid();
    const Eigen::VectorXd cy = y.centroid();
    const Eigen::MatrixXd xc = x.points().colwise() - cx;
    const Eigen::MatrixXd yc = y.points().colwise() - cy;

    const Eigen::MatrixXd m = xc * yc.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Maximizes tr(R * yc * xc^T) over all of O(d); no determinant fix-up.
    Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();

    // The aligned residual is stable even when the configurations coincide.
    const double dist = (xc - rot * yc).norm();

    OrthogonalMatrix rotation(std::move(rot));
    Eigen::VectorXd translation = cx - rotation.entries() * cy;
    (void)d;
    return {RigidMotion(std::move(rotation), std::move(translation)), dist};
}

int config_dim(int d, int k) {
    if (d < 2) throw std::invalid_argument("config_dim: requires d >= 2");
    if (k <= d)
        throw std::invalid_argument(
            "config_dim: requires k >= d+1 (formula holds on the maximal-rank stratum)");
    return d * k - d * (d + 1) / 2;
}

Rational threshold(int d, int k) {
    if (d < 2) throw std::invalid_argument("threshold: requires d >= 2");
    if (k < 3) throw std::invalid_argument("threshold: requires k >= 3");
    if (k >= d + 1) return Rational(d) - Rational(d - 1, k);
    return Rational(d) - Rational(k - 2, k);
}

int configuration_rank(const Configuration& x, double tol) {
    if (tol <= 0) throw std::invalid_argument("configuration_rank: tol must be positive");
    const Eigen::MatrixXd diffs = center(x, Centering::FirstPoint).diffs();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs.transpose());
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double top = sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * top) ++rank;
    return rank;
}

Configuration affine_reduce(const Configuration& x) {
    if (x.k() > x.d())
        throw std::invalid_argument("affine_reduce: requires k <= d");
    const int k = x.k();
    const Eigen::MatrixXd diffs = center(x, Centering::FirstPoint).diffs();  // d x (k-1)
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
    const Eigen::MatrixXd basis = svd.matrixU();  // d x (k-1) orthonormal columns
    Eigen::MatrixXd reduced = Eigen::MatrixXd::Zero(k - 1, k);
    reduced.rightCols(k - 1) = basis.transpose() * diffs;
    return Configuration(std::move(reduced));
}

}  // namespace confract::geom
