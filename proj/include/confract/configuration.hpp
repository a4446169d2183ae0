#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace confract::geom {

/// Ordered tuple of k points in R^d, stored one point per column.
class Configuration {
  public:
    Configuration(int d, int k) : points_(Eigen::MatrixXd::Zero(d, k)) {
        if (d < 1) throw std::invalid_argument("Configuration: d must be >= 1");
        if (k < 2) throw std::invalid_argument("Configuration: k must be >= 2");
    }
    explicit Configuration(Eigen::MatrixXd points) : points_(std::move(points)) {
        if (points_.rows() < 1) throw std::invalid_argument("Configuration: d must be >= 1");
        if (points_.cols() < 2) throw std::invalid_argument("Configuration: k must be >= 2");
        if (!points_.allFinite())
            throw std::invalid_argument("Configuration: coordinates must be finite");
    }

    int d() const { return static_cast<int>(points_.rows()); }
    int k() const { return static_cast<int>(points_.cols()); }

    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::MatrixXd& points() { return points_; }
    Eigen::VectorXd point(int j) const { return points_.col(j); }

    /// Euclidean norm on the direct sum of k copies of R^d.
    double tuple_norm() const { return points_.norm(); }

    Eigen::VectorXd centroid() const { return points_.rowwise().mean(); }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
               a.points_ == b.points_;
    }

  private:
    Eigen::MatrixXd points_;
};

enum class Centering { FirstPoint, Centroid };

/// Difference representation of a configuration: (k-1) vectors x_j - x_1
/// under FirstPoint centering, or all k points minus their mean under
/// Centroid centering (those sum to zero).
class CenteredConfiguration {
  public:
    CenteredConfiguration(Eigen::MatrixXd diffs, Centering convention)
        : diffs_(std::move(diffs)), convention_(convention) {
        if (convention_ == Centering::Centroid) {
            const double scale = 1.0 + diffs_.norm();
            if ((diffs_.rowwise().sum()).norm() > 1e-12 * scale)
                throw std::invalid_argument(
                    "CenteredConfiguration: centroid-centered vectors must sum to zero");
        }
    }

    int d() const { return static_cast<int>(diffs_.rows()); }
    int count() const { return static_cast<int>(diffs_.cols()); }
    const Eigen::MatrixXd& diffs() const { return diffs_; }
    Centering convention() const { return convention_; }

  private:
    Eigen::MatrixXd diffs_;
    Centering convention_;
};

/// Element of O(d); construction validates orthonormality and determinant.
class OrthogonalMatrix {
  public:
    explicit OrthogonalMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw std::invalid_argument("OrthogonalMatrix: matrix must be square");
        const int d = static_cast<int>(entries_.rows());
        const double residual =
            (entries_.transpose() * entries_ - Eigen::MatrixXd::Identity(d, d))
                .cwiseAbs()
                .maxCoeff();
        if (residual > 1e-12)
            throw std::invalid_argument("OrthogonalMatrix: transpose*self deviates from identity");
        const double det = entries_.determinant();
        if (std::abs(std::abs(det) - 1.0) > 1e-9)
            throw std::invalid_argument("OrthogonalMatrix: determinant must be +1 or -1");
        det_sign_ = det > 0 ? 1 : -1;
    }

    int d() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    int det_sign() const { return det_sign_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const { return entries_ * p; }

    static OrthogonalMatrix identity(int d) {
        return OrthogonalMatrix(Eigen::MatrixXd::Identity(d, d));
    }

  private:
    Eigen::MatrixXd entries_;
    int det_sign_ = 1;
};

/// Rigid motion p -> rotation*p + translation, an element of E(d).
struct RigidMotion {
    OrthogonalMatrix rotation;
    Eigen::VectorXd translation;

    RigidMotion(OrthogonalMatrix rot, Eigen::VectorXd trans)
        : rotation(std::move(rot)), translation(std::move(trans)) {
        if (rotation.d() != translation.size())
            throw std::invalid_argument("RigidMotion: rotation/translation dimension mismatch");
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const {
        return rotation.entries() * p + translation;
    }

    Configuration apply(const Configuration& x) const {
        if (x.d() != rotation.d())
            throw std::invalid_argument("RigidMotion: configuration dimension mismatch");
        Eigen::MatrixXd moved = rotation.entries() * x.points();
        moved.colwise() += translation;
        return Configuration(std::move(moved));
    }

    static RigidMotion identity(int d) {
        return RigidMotion(OrthogonalMatrix::identity(d), Eigen::VectorXd::Zero(d));
    }
};

}  // namespace confract::geom
