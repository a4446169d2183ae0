#include "confract/fractal.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace confract;
using fractal::SimilarityIFS;

namespace {

SimilarityIFS middle_thirds() {
    Eigen::VectorXd t0(1), t1(1);
    t0 << 0.0;
    t1 << 2.0 / 3.0;
    std::vector<fractal::Similarity> maps{fractal::Similarity::axis_aligned(1.0 / 3.0, t0),
                                          fractal::Similarity::axis_aligned(1.0 / 3.0, t1)};
    return SimilarityIFS(std::move(maps));
}

}  // namespace

TEST_CASE("similarity_dimension: middle-thirds Cantor") {
    CHECK(fractal::similarity_dimension(middle_thirds()) ==
          doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-11));
}

TEST_CASE("similarity_dimension: four quarter maps give dimension 1") {
    std::vector<fractal::Similarity> maps;
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd t(1);
        t << i * 0.25;
        maps.push_back(fractal::Similarity::axis_aligned(0.25, t));
    }
    CHECK(fractal::similarity_dimension(SimilarityIFS(std::move(maps))) ==
          doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("similarity_dimension: mixed ratios 1/2 and 1/4") {
    Eigen::VectorXd t0(1), t1(1);
    t0 << 0.0;
    t1 << 0.75;
    std::vector<fractal::Similarity> maps{fractal::Similarity::axis_aligned(0.5, t0),
                                          fractal::Similarity::axis_aligned(0.25, t1)};
    const double s = fractal::similarity_dimension(SimilarityIFS(std::move(maps)));
    // With t = (1/2)^s the Moran equation reads t^2 + t = 1, so t is the
    // golden-ratio conjugate and s = log2(1/t).
    const double t = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(s == doctest::Approx(std::log2(1.0 / t)).epsilon(1e-11));
    CHECK(s == doctest::Approx(0.694242).epsilon(1e-6));
}

TEST_CASE("similarity_dimension is monotone in maps and ratios") {
    haar::SplitRng rng(haar::RngSeed{31, 0});
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(3));
        std::vector<fractal::Similarity> maps;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd t(1);
            t << rng.uniform();
            maps.push_back(
                fractal::Similarity::axis_aligned(0.05 + 0.5 * rng.uniform(), t));
        }
        const SimilarityIFS base(maps);
        const double s_base = fractal::similarity_dimension(base);

        Eigen::VectorXd t_extra(1);
        t_extra << 2.0;
        auto grown = maps;
        grown.push_back(fractal::Similarity::axis_aligned(0.3, t_extra));
        CHECK(fractal::similarity_dimension(SimilarityIFS(grown)) > s_base);

        auto shrunk = maps;
        shrunk[0] = fractal::Similarity::axis_aligned(shrunk[0].ratio * 0.5,
                                                      shrunk[0].translation);
        CHECK(fractal::similarity_dimension(SimilarityIFS(shrunk)) < s_base);
    }
}

TEST_CASE("make_cantor_like: middle-thirds parameters recovered") {
    const auto ifs = fractal::make_cantor_like(1, std::log(2.0) / std::log(3.0), 2);
    REQUIRE(ifs.map_count() == 2);
    CHECK(ifs.maps()[0].ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(fractal::similarity_dimension(ifs) ==
          doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("make_cantor_like: full square at target dimension 2") {
    const auto ifs = fractal::make_cantor_like(2, 2.0, 2);
    REQUIRE(ifs.map_count() == 4);
    CHECK(ifs.maps()[0].ratio == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("make_cantor_like: d=2 target 1.9 with 3 maps per axis") {
    const auto ifs = fractal::make_cantor_like(2, 1.9, 3);
    REQUIRE(ifs.map_count() == 9);
    CHECK(ifs.maps()[0].ratio == doctest::Approx(std::pow(3.0, -2.0 / 1.9)).epsilon(1e-12));
    CHECK(fractal::similarity_dimension(ifs) == doctest::Approx(1.9).epsilon(1e-9));
}

TEST_CASE("make_cantor_like rejects overlapping pieces") {
    CHECK_THROWS_WITH_AS(fractal::make_cantor_like(2, 2.5, 3),
                         doctest::Contains("feasible target_dim"), std::invalid_argument);
}

TEST_CASE("chaos game samples stay on the attractor") {
    const auto ifs = middle_thirds();
    const auto samples = fractal::chaos_game_sample(ifs, 5000, 64, haar::RngSeed{32, 0});
    REQUIRE(samples.n() == 5000);
    const auto box = fractal::attractor_bounding_box(ifs);
    for (int i = 0; i < samples.n(); ++i) {
        const double v = samples.points(0, i);
        CHECK(box.contains(samples.points.col(i), 1e-9));
        // The middle third is empty apart from contraction transients.
        const double gap_pad = std::pow(1.0 / 3.0, 64);
        CHECK((v <= 1.0 / 3.0 + gap_pad || v >= 2.0 / 3.0 - gap_pad));
    }
}

TEST_CASE("chaos game is reproducible and seed-sensitive") {
    const auto ifs = fractal::make_cantor_like(2, 1.5, 2);
    const auto a = fractal::chaos_game_sample(ifs, 1000, 64, haar::RngSeed{33, 1});
    const auto b = fractal::chaos_game_sample(ifs, 1000, 64, haar::RngSeed{33, 1});
    const auto c = fractal::chaos_game_sample(ifs, 1000, 64, haar::RngSeed{33, 2});
    CHECK(a.points == b.points);
    CHECK(a.points != c.points);
}

TEST_CASE("chaos game validates its arguments") {
    const auto ifs = middle_thirds();
    CHECK_THROWS_AS(fractal::chaos_game_sample(ifs, 0, 64, haar::RngSeed{34, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fractal::chaos_game_sample(ifs, 10, 8, haar::RngSeed{34, 0}),
                    std::invalid_argument);
}

TEST_CASE("single-map systems are rejected at construction") {
    Eigen::VectorXd t(1);
    t << 0.0;
    std::vector<fractal::Similarity> one{fractal::Similarity::axis_aligned(0.5, t)};
    CHECK_THROWS_AS(SimilarityIFS{std::move(one)}, std::invalid_argument);
}

TEST_CASE("deterministic_cells: depth structure of the middle-thirds set") {
    const auto ifs = middle_thirds();

    const auto depth0 = fractal::deterministic_cells(ifs, 0);
    REQUIRE(depth0.size() == 1);
    CHECK(depth0[0].center(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(depth0[0].radius == doctest::Approx(0.5).epsilon(1e-12));

    const auto depth1 = fractal::deterministic_cells(ifs, 1);
    REQUIRE(depth1.size() == 2);
    CHECK(depth1[0].center(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(depth1[1].center(0) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(depth1[0].radius == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    const auto depth2 = fractal::deterministic_cells(ifs, 2);
    REQUIRE(depth2.size() == 4);
    for (const auto& cell : depth2) CHECK(cell.radius == doctest::Approx(1.0 / 18.0));

    CHECK_THROWS_AS(fractal::deterministic_cells(ifs, 30), std::invalid_argument);
}

TEST_CASE("box-counting dimension of chaos-game samples tracks the formula") {
    const auto ifs = fractal::make_cantor_like(2, 1.9, 3);
    const auto samples = fractal::chaos_game_sample(ifs, 100000, 64, haar::RngSeed{35, 0});
    const double boxdim = oracle::box_counting_dimension(samples.points, 3, 8);
    CHECK(boxdim == doctest::Approx(1.9).epsilon(0.10));

    // Oracle sanity: the same routine on deterministic depth-6 cell centers.
    const auto cells = fractal::deterministic_cells(ifs, 6);
    Eigen::MatrixXd centers(2, static_cast<long>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i)
        centers.col(static_cast<long>(i)) = cells[i].center;
    const double celldim = oracle::box_counting_dimension(centers, 3, 8);
    CHECK(celldim == doctest::Approx(1.9).epsilon(0.10));
}

TEST_CASE("push-forward by the maps reproduces the sample distribution") {
    const auto ifs = fractal::make_cantor_like(2, 1.5, 2);
    const int n = 10000;
    const auto base = fractal::chaos_game_sample(ifs, n, 64, haar::RngSeed{36, 0});
    haar::SplitRng rng(haar::RngSeed{36, 1});

    // Push each resampled point through a weight-chosen map.
    Eigen::MatrixXd pushed(2, n);
    for (int i = 0; i < n; ++i) {
        const auto& m = ifs.maps()[rng.uniform_index(ifs.maps().size())];
        pushed.col(i) = m.apply(base.points.col(rng.uniform_index(n)));
    }
    const auto fresh = fractal::chaos_game_sample(ifs, n, 64, haar::RngSeed{36, 2});

    // Energy-distance statistics from pair subsampling: pushforward-vs-base
    // should look like a same-distribution replicate (fresh-vs-base).
    const auto energy_stat = [&rng, n](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        const int pairs = 200000;
        double ab = 0, aa = 0, bb = 0;
        for (int i = 0; i < pairs; ++i) {
            const auto c1 = rng.uniform_index(n);
            const auto c2 = rng.uniform_index(n);
            ab += (a.col(c1) - b.col(c2)).norm();
            aa += (a.col(c1) - a.col(c2)).norm();
            bb += (b.col(c1) - b.col(c2)).norm();
        }
        return (2.0 * ab - aa - bb) / pairs;
    };
    const double push_stat = std::abs(energy_stat(pushed, base.points));
    const double null_stat = std::abs(energy_stat(fresh.points, base.points));
    CHECK(push_stat < 3.0 * null_stat + 0.01);
}

TEST_CASE("sample points obey the declared norm bound") {
    const auto ifs = fractal::make_cantor_like(2, 1.9, 3);
    const auto samples = fractal::chaos_game_sample(ifs, 2000, 64, haar::RngSeed{37, 0});
    CHECK(samples.norm_bound() <= std::sqrt(2.0) + 1e-9);
    const auto box = fractal::attractor_bounding_box(ifs);
    for (int i = 0; i < samples.n(); ++i) CHECK(box.contains(samples.points.col(i), 1e-9));
}
