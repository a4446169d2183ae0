#include "confract/haar.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <stdexcept>
#include <string>

namespace confract::haar {

using geom::OrthogonalMatrix;

static Eigen::MatrixXd gaussian_matrix(int d, SplitRng& rng) {
    Eigen::MatrixXd g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
    return g;
}

OrthogonalMatrix sample_orthogonal(int d, SplitRng& rng) {
    if (d <= 0) throw std::invalid_argument("sample_orthogonal: d must be >= 1");
    const Eigen::MatrixXd g = gaussian_matrix(d, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    if (q.determinant() < 0.0) q.row(0) = -q.row(0);
    // The coin is always drawn so the stream advances uniformly per sample.
    if (rng.bernoulli_half()) q.row(0) = -q.row(0);
    return OrthogonalMatrix(std::move(q));
}

OrthogonalMatrix sample_near(const geom::OrthogonalMatrix& rho0, double delta, SplitRng& rng,
                             int max_attempts) {
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("sample_near: delta must lie in (0, 0.5]");
    const int d = rho0.d();
    const double sigma = delta / (2.0 * d);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        const Eigen::MatrixXd perturbed = rho0.entries() + sigma * gaussian_matrix(d, rng);
        // Nearest orthogonal matrix via the polar factor; continuous in the
        // perturbation, so small noise stays in rho0's component.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(perturbed,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
        if ((q - rho0.entries()).norm() > delta) continue;
        OrthogonalMatrix out(std::move(q));
        if (out.det_sign() != rho0.det_sign()) continue;
        return out;
    }
    throw std::runtime_error("sample_near: no sample within delta after " +
                             std::to_string(max_attempts) + " attempts");
}

}  // namespace confract::haar
