#include "confract/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace confract::fractal {

Similarity Similarity::compose(const Similarity& inner) const {
    Eigen::MatrixXd o = orthogonal.entries() * inner.orthogonal.entries();
    Eigen::VectorXd t = ratio * (orthogonal.entries() * inner.translation) + translation;
    return Similarity(ratio * inner.ratio, geom::OrthogonalMatrix(std::move(o)), std::move(t));
}

Similarity Similarity::axis_aligned(double ratio, Eigen::VectorXd translation) {
    const int d = static_cast<int>(translation.size());
    return Similarity(ratio, geom::OrthogonalMatrix::identity(d), std::move(translation));
}

SimilarityIFS::SimilarityIFS(std::vector<Similarity> maps, std::vector<double> weights)
    : maps_(std::move(maps)), weights_(std::move(weights)) {
    validate();
}

SimilarityIFS::SimilarityIFS(std::vector<Similarity> maps) : maps_(std::move(maps)) {
    weights_.assign(maps_.size(), maps_.empty() ? 1.0 : 1.0 / static_cast<double>(maps_.size()));
    validate();
}

void SimilarityIFS::validate() const {
    if (maps_.size() < 2)
        throw std::invalid_argument("SimilarityIFS: at least 2 maps required");
    if (weights_.size() != maps_.size())
        throw std::invalid_argument("SimilarityIFS: one weight per map required");
    const int d = maps_[0].d();
    for (const auto& m : maps_)
        if (m.d() != d) throw std::invalid_argument("SimilarityIFS: mixed dimensions");
    double total = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw std::invalid_argument("SimilarityIFS: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("SimilarityIFS: weights must sum to 1");
}

Box attractor_bounding_box(const SimilarityIFS& ifs) {
    const int d = ifs.d();
    const int n = ifs.map_count();

    // Invariant ball: center at the mean of the map fixed points, radius
    // max_i |S_i(c) - c| / (1 - r_i).
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
    for (const auto& m : ifs.maps()) {
        const Eigen::MatrixXd a =
            Eigen::MatrixXd::Identity(d, d) - m.ratio * m.orthogonal.entries();
        c += a.colPivHouseholderQr().solve(m.translation);
    }
    c /= static_cast<double>(n);
    double radius = 0.0;
    for (const auto& m : ifs.maps())
        radius = std::max(radius, (m.apply(c) - c).norm() / (1.0 - m.ratio));

    Box box{c, Eigen::VectorXd::Constant(d, radius > 0.0 ? radius : 1e-300)};
    // Refine: the image AABB of a box under p -> A p + b has center A c + b
    // and halfwidth |A| h. Each refinement still contains the attractor.
    for (int iter = 0; iter < 96; ++iter) {
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::max());
        Eigen::VectorXd hi = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::lowest());
        for (const auto& m : ifs.maps()) {
            const Eigen::MatrixXd a = m.ratio * m.orthogonal.entries();
            const Eigen::VectorXd ic = a * box.center + m.translation;
            const Eigen::VectorXd ih = a.cwiseAbs() * box.halfwidth;
            lo = lo.cwiseMin(ic - ih);
            hi = hi.cwiseMax(ic + ih);
        }
        box.center = 0.5 * (lo + hi);
        box.halfwidth = 0.5 * (hi - lo);
    }
    return box;
}

double similarity_dimension(const SimilarityIFS& ifs) {
    const auto moran = [&ifs](double s) {
        double total = 0.0;
        for (const auto& m : ifs.maps()) total += std::pow(m.ratio, s);
        return total - 1.0;
    };
    double lo = 0.0;        // moran(0) = N - 1 > 0
    double hi = 1.0;
    while (moran(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("similarity_dimension: bisection bracket failed");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        (moran(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SimilarityIFS make_cantor_like(int d, double target_dim, int n_per_axis) {
    if (d < 1) throw std::invalid_argument("make_cantor_like: d must be >= 1");
    if (n_per_axis < 2) throw std::invalid_argument("make_cantor_like: n_per_axis must be >= 2");
    if (!(target_dim > 0.0))
        throw std::invalid_argument("make_cantor_like: target_dim must be positive");

    const double ratio = std::pow(static_cast<double>(n_per_axis),
                                  -static_cast<double>(d) / target_dim);
    if (ratio * n_per_axis > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "make_cantor_like: pieces would overlap (r*N = " << ratio * n_per_axis
            << " > 1); feasible target_dim range is (0, " << d << "]";
        throw std::invalid_argument(msg.str());
    }

    std::int64_t total = 1;
    for (int axis = 0; axis < d; ++axis) {
        total *= n_per_axis;
        if (total > (1 << 22))
            throw std::invalid_argument("make_cantor_like: map count n_per_axis^d too large");
    }

    const double step = n_per_axis > 1
                            ? (1.0 - ratio) / static_cast<double>(n_per_axis - 1)
                            : 0.0;
    std::vector<Similarity> maps;
    maps.reserve(static_cast<std::size_t>(total));
    std::vector<int> index(d, 0);
    for (std::int64_t count = 0; count < total; ++count) {
        Eigen::VectorXd t(d);
        for (int axis = 0; axis < d; ++axis) t(axis) = step * index[axis];
        maps.push_back(Similarity::axis_aligned(ratio, std::move(t)));
        for (int axis = 0; axis < d; ++axis) {
            if (++index[axis] < n_per_axis) break;
            index[axis] = 0;
        }
    }
    SimilarityIFS ifs(std::move(maps));
    std::ostringstream desc;
    desc << "cantor(d=" << d << ",target_dim=" << target_dim << ",n_per_axis=" << n_per_axis
         << ")";
    ifs.set_description(desc.str());
    return ifs;
}

SimilarityIFS make_segment(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("make_segment: dimension mismatch");
    if ((a - b).norm() == 0.0) throw std::invalid_argument("make_segment: endpoints coincide");
    // Two half-scale contractions toward each endpoint; the attractor is the
    // segment [a, b] and the natural measure is uniform length measure.
    std::vector<Similarity> maps;
    maps.push_back(Similarity::axis_aligned(0.5, 0.5 * a));
    maps.push_back(Similarity::axis_aligned(0.5, 0.5 * b));
    SimilarityIFS ifs(std::move(maps));
    ifs.set_description("segment");
    return ifs;
}

SampleSet chaos_game_sample(const SimilarityIFS& ifs, int n, int burn_in, haar::RngSeed seed) {
    if (n < 1) throw std::invalid_argument("chaos_game_sample: n must be >= 1");
    if (burn_in < 32) throw std::invalid_argument("chaos_game_sample: burn_in must be >= 32");

    haar::SplitRng rng(seed);
    const int d = ifs.d();
    const auto& weights = ifs.weights();
    const int n_maps = ifs.map_count();

    std::vector<double> cumulative(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
    cumulative.back() = 1.0;
    const auto pick_map = [&](double u) {
        const int lo = static_cast<int>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        return lo < n_maps ? lo : n_maps - 1;
    };

    // Start at the fixed point of a randomly chosen map; it lies on the
    // attractor, so every later iterate does too.
    const int first = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n_maps)));
    const auto& m0 = ifs.maps()[static_cast<std::size_t>(first)];
    const Eigen::MatrixXd a0 =
        Eigen::MatrixXd::Identity(d, d) - m0.ratio * m0.orthogonal.entries();
    Eigen::VectorXd point = a0.colPivHouseholderQr().solve(m0.translation);

    for (int i = 0; i < burn_in; ++i)
        point = ifs.maps()[static_cast<std::size_t>(pick_map(rng.uniform()))].apply(point);

    SampleSet out;
    out.points.resize(d, n);
    for (int i = 0; i < n; ++i) {
        point = ifs.maps()[static_cast<std::size_t>(pick_map(rng.uniform()))].apply(point);
        out.points.col(i) = point;
    }
    out.ifs_description = ifs.description();
    out.seed = seed;
    out.burn_in = burn_in;
    return out;
}

std::vector<Cell> deterministic_cells(const SimilarityIFS& ifs, int depth,
                                      std::int64_t max_cells) {
    if (depth < 0) throw std::invalid_argument("deterministic_cells: depth must be >= 0");
    std::int64_t count = 1;
    for (int i = 0; i < depth; ++i) {
        count *= ifs.map_count();
        if (count > max_cells)
            throw std::invalid_argument("deterministic_cells: cell count exceeds cap");
    }

    const Box box = attractor_bounding_box(ifs);
    const double radius0 = box.circumradius();

    struct Node {
        Eigen::VectorXd center;
        double ratio;
    };
    std::vector<Node> nodes{{box.center, 1.0}};
    for (int level = 0; level < depth; ++level) {
        std::vector<Node> next;
        next.reserve(nodes.size() * static_cast<std::size_t>(ifs.map_count()));
        for (const auto& node : nodes)
            for (const auto& m : ifs.maps())
                next.push_back({m.apply(node.center), node.ratio * m.ratio});
        nodes = std::move(next);
    }

    std::vector<Cell> cells;
    cells.reserve(nodes.size());
    for (const auto& node : nodes) cells.push_back({node.center, node.ratio * radius0});
    return cells;
}

}  // namespace confract::fractal
