#pragma once

#include "confract/configuration.hpp"
#include "confract/rng.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace confract::fractal {

/// Contracting similarity p -> ratio * orthogonal * p + translation.
struct Similarity {
    double ratio;
    geom::OrthogonalMatrix orthogonal;
    Eigen::VectorXd translation;

    Similarity(double r, geom::OrthogonalMatrix o, Eigen::VectorXd t)
        : ratio(r), orthogonal(std::move(o)), translation(std::move(t)) {
        if (!(ratio > 0.0 && ratio < 1.0))
            throw std::invalid_argument("Similarity: ratio must lie in (0, 1)");
        if (orthogonal.d() != translation.size())
            throw std::invalid_argument("Similarity: dimension mismatch");
    }

    int d() const { return orthogonal.d(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const {
        return ratio * (orthogonal.entries() * p) + translation;
    }

    /// Composition a.then(b) maps p to a(b(p)).
    Similarity compose(const Similarity& inner) const;

    /// Axis-aligned contraction without rotation.
    static Similarity axis_aligned(double ratio, Eigen::VectorXd translation);
};

/// Iterated function system of N >= 2 similarities with a probability vector.
class SimilarityIFS {
  public:
    SimilarityIFS(std::vector<Similarity> maps, std::vector<double> weights);
    /// Uniform weights.
    explicit SimilarityIFS(std::vector<Similarity> maps);

    int d() const { return maps_[0].d(); }
    int map_count() const { return static_cast<int>(maps_.size()); }
    const std::vector<Similarity>& maps() const { return maps_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::string& description() const { return description_; }
    void set_description(std::string text) { description_ = std::move(text); }

  private:
    void validate() const;

    std::vector<Similarity> maps_;
    std::vector<double> weights_;
    std::string description_;
};

/// Axis-aligned box, center/halfwidth representation.
struct Box {
    Eigen::VectorXd center;
    Eigen::VectorXd halfwidth;

    bool contains(const Eigen::VectorXd& p, double slack = 0.0) const {
        return ((p - center).cwiseAbs().array() <= halfwidth.array() + slack).all();
    }
    double circumradius() const { return halfwidth.norm(); }
    double diameter() const { return 2.0 * halfwidth.norm(); }
};

/// Box containing the attractor, found by refining an invariant bounding
/// ball under the IFS maps.
Box attractor_bounding_box(const SimilarityIFS& ifs);

/// Unique s solving sum_i ratio_i^s = 1 (Moran equation), by bisection.
double similarity_dimension(const SimilarityIFS& ifs);

/// Product-Cantor IFS on [0,1]^d with similarity dimension target_dim:
/// each axis carries n_per_axis equally spaced contractions of ratio
/// n_per_axis^(-d/target_dim). Rejects parameters whose pieces would overlap.
SimilarityIFS make_cantor_like(int d, double target_dim, int n_per_axis);

/// Uniform measure on a segment from a to b, realized as a 2-map IFS whose
/// attractor is the segment.
SimilarityIFS make_segment(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Seeded draws approximating the IFS's self-similar measure.
struct SampleSet {
    Eigen::MatrixXd points;  // d x n, one point per column
    std::string ifs_description;
    haar::RngSeed seed;
    int burn_in = 0;

    int d() const { return static_cast<int>(points.rows()); }
    int n() const { return static_cast<int>(points.cols()); }
    double norm_bound() const { return points.colwise().norm().maxCoeff(); }
};

/// Chaos game: iterate a random start under maps drawn by weight, discard
/// burn_in iterates, record the next n.
SampleSet chaos_game_sample(const SimilarityIFS& ifs, int n, int burn_in, haar::RngSeed seed);

struct Cell {
    Eigen::VectorXd center;
    double radius;
};

/// Centers and radii of all depth-fold map compositions applied to the
/// attractor's bounding box. Cell count N^depth is capped.
std::vector<Cell> deterministic_cells(const SimilarityIFS& ifs, int depth,
                                      std::int64_t max_cells = 1 << 21);

}  // namespace confract::fractal
