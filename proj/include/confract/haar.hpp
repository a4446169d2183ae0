#pragma once

#include "confract/configuration.hpp"
#include "confract/rng.hpp"

namespace confract::haar {

/// Haar-distributed element of O(d). A Gaussian matrix is orthonormalized by
/// QR with the triangular factor's diagonal forced positive, the result is
/// normalized to det = +1, and a fair coin flips the sign of the first row,
/// giving each determinant component mass exactly 1/2.
geom::OrthogonalMatrix sample_orthogonal(int d, SplitRng& rng);

/// Element of O(d) within Frobenius distance delta of rho0, in the same
/// connected component. Rejection-samples re-orthonormalized perturbations;
/// throws std::runtime_error with the attempt count if the cap is exhausted.
geom::OrthogonalMatrix sample_near(const geom::OrthogonalMatrix& rho0, double delta,
                                   SplitRng& rng, int max_attempts = 10000);

}  // namespace confract::haar
