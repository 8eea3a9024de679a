#include "greendens/knn.hpp"

#include "greendens/errors.hpp"
#include "greendens/rng.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace greendens;

TEST_CASE("ball volumes") {
    CHECK(ball_volume(2, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
    CHECK(ball_volume(2, 2.0) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(ball_volume(2, 0.0) == 0.0);
    CHECK_THROWS_AS(ball_volume(2, -1.0), InvalidArgument);
}

TEST_CASE("knn density with a crafted 10th-neighbour radius") {
    // 9 points inside 0.1, the 10th exactly at 0.1, 990 far away; N = 1000
    std::vector<double> pts;
    for (int m = 1; m <= 9; ++m) {
        pts.push_back(0.01 * m);
        pts.push_back(0.0);
    }
    pts.push_back(0.1);
    pts.push_back(0.0);
    for (int m = 0; m < 990; ++m) {
        pts.push_back(1.0 + 0.001 * m);
        pts.push_back(1.0);
    }
    SampleSet s(2, std::move(pts));
    NeighborIndex idx(s);
    double g = knn_density(s, idx, std::vector{0.0, 0.0}, 10);
    CHECK(g == doctest::Approx(10.0 / (1000.0 * std::numbers::pi * 0.01)).epsilon(1e-9));
}

TEST_CASE("knn density matches a sort-all-distances oracle") {
    Rng rng(314);
    std::vector<double> pts(600);
    for (double& x : pts) x = rng.gaussian();
    SampleSet s(2, std::move(pts));
    NeighborIndex idx(s);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x{rng.gaussian(), rng.gaussian()};
        std::size_t k = 1 + static_cast<std::size_t>(t) * 7 % 50;
        std::vector<double> d;
        for (std::size_t j = 0; j < s.size(); ++j) {
            double r2 = 0.0;
            for (int c = 0; c < 2; ++c) {
                double diff = x[static_cast<std::size_t>(c)] -
                              s.point(j)[static_cast<std::size_t>(c)];
                r2 += diff * diff;
            }
            d.push_back(std::sqrt(r2));
        }
        std::sort(d.begin(), d.end());
        double expected = static_cast<double>(k) /
                          (static_cast<double>(s.size()) * ball_volume(2, d[k - 1]));
        CHECK(knn_density(s, idx, x, k) == expected);
    }
}

TEST_CASE("knn density on a uniform square is near 1") {
    Rng rng(2718);
    const std::size_t n = 10000;
    std::vector<double> pts(2 * n);
    for (double& x : pts) x = rng.uniform01();
    SampleSet s(2, std::move(pts));
    NeighborIndex idx(s);
    const std::size_t k = 100; // ceil(sqrt(N))
    double sum = 0.0;
    int queries = 0;
    for (double qx : {0.3, 0.4, 0.5, 0.6, 0.7}) {
        for (double qy : {0.3, 0.5, 0.7}) {
            double g = knn_density(s, idx, std::vector{qx, qy}, k);
            CHECK(g > 0.7);
            CHECK(g < 1.3);
            sum += g;
            ++queries;
        }
    }
    CHECK(sum / queries == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("matched resolution: knn radius equals the model exclusion radius") {
    const DensityModel& m = small_gauss_model();
    const std::size_t k = m.n_discr_eval();
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x{rng.gaussian(), rng.gaussian()};
        double delta_r = m.index().kth_distance(x, k, true);
        double g = knn_density(m.sample(), m.index(), x, k);
        CHECK(g == static_cast<double>(k) / (static_cast<double>(m.sample().size()) *
                                             ball_volume(2, delta_r)));
    }
}

TEST_CASE("knn batch is order-preserving") {
    const DensityModel& m = small_gauss_model();
    PointMatrix q(2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.5});
    std::vector<double> batch = knn_density_batch(m.sample(), m.index(), q, 20);
    REQUIRE(batch.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(batch[i] == knn_density(m.sample(), m.index(), q.row(i), 20));
}
