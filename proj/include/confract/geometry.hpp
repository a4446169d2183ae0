#pragma once

#include "confract/configuration.hpp"
#include "confract/rational.hpp"

#include <utility>

namespace confract::geom {

/// Difference representation per the chosen centering convention.
CenteredConfiguration center(const Configuration& x, Centering convention);

/// Quotient metric on configurations: min over rigid motions g of ||x - g.y||.
/// The optimal translation matches centroids; the orthogonal part is solved in
/// closed form from the singular values of the cross-covariance matrix, with
/// no determinant constraint (reflections allowed).
double procrustes_distance(const Configuration& x, const Configuration& y);

/// A rigid motion attaining procrustes_distance(x, y), together with the
/// attained distance. When the configurations are rank-deficient the
/// minimizer is not unique; any minimizer is returned.
std::pair<RigidMotion, double> optimal_alignment(const Configuration& x,
                                                 const Configuration& y);

/// Dimension of the maximal-rank stratum of the configuration space:
/// m = d*k - d(d+1)/2. Requires d >= 2 and k >= d+1.
int config_dim(int d, int k);

/// Dimension threshold separating the bounded-energy regime of k-point
/// configuration distributions, as an exact rational: d - (d-1)/k for
/// k >= d+1, and d - (k-2)/k for 3 <= k <= d.
Rational threshold(int d, int k);

/// Rank of the (k-1) x d first-point difference matrix, counting singular
/// values above tol times the largest one. Rank below min(k-1, d) marks the
/// singular stratum.
int configuration_rank(const Configuration& x, double tol = 1e-9);

/// For k <= d, re-express the points in an orthonormal basis of their affine
/// span, producing an isometric configuration in R^(k-1). Coordinates past
/// the span's rank are zero.
Configuration affine_reduce(const Configuration& x);

namespace detail {

/// Procrustes distance between configurations already centered at their
/// centroids, passed as d x k matrices. Hot path for the estimators.
double centered_procrustes_distance(const Eigen::MatrixXd& xc, const Eigen::MatrixXd& yc);

}  // namespace detail

}  // namespace confract::geom
