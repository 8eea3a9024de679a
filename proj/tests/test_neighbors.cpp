#include "greendens/neighbors.hpp"

#include "greendens/errors.hpp"
#include "greendens/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace greendens;

namespace {

// Linear-scan oracle for both queries.
struct BruteForce {
    const SampleSet& s;

    std::vector<std::pair<double, std::uint32_t>> sorted_distances(
        std::span<const double> x, bool exclude_self) const {
        std::vector<std::pair<double, std::uint32_t>> d;
        for (std::size_t j = 0; j < s.size(); ++j) {
            double r2 = 0.0;
            std::span<const double> p = s.point(j);
            for (std::size_t k = 0; k < p.size(); ++k) {
                double diff = x[k] - p[k];
                r2 += diff * diff;
            }
            if (exclude_self && r2 == 0.0) continue;
            d.emplace_back(std::sqrt(r2), static_cast<std::uint32_t>(j));
        }
        std::sort(d.begin(), d.end());
        return d;
    }

    double kth(std::span<const double> x, std::size_t k, bool exclude_self) const {
        auto d = sorted_distances(x, exclude_self);
        return d.at(k - 1).first;
    }

    std::vector<std::uint32_t> beyond(std::span<const double> x, double R) const {
        std::vector<std::uint32_t> out;
        for (std::size_t j = 0; j < s.size(); ++j) {
            double r2 = 0.0;
            std::span<const double> p = s.point(j);
            for (std::size_t k = 0; k < p.size(); ++k) {
                double diff = x[k] - p[k];
                r2 += diff * diff;
            }
            if (std::sqrt(r2) > R) out.push_back(static_cast<std::uint32_t>(j));
        }
        return out;
    }
};

SampleSet random_sample(int dim, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> pts(n * static_cast<std::size_t>(dim));
    for (double& x : pts) x = rng.gaussian();
    return SampleSet(dim, std::move(pts));
}

} // namespace

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(SampleSet(2, {0.0, 0.0}), InvalidArgument); // one point
    CHECK_THROWS_AS(SampleSet(2, {0.0, 0.0, 1.0}), InvalidArgument); // ragged
    CHECK_THROWS_AS(SampleSet(2, {0.0, 0.0, 0.0, 0.0}), InvalidArgument); // duplicate
    CHECK_THROWS_AS(SampleSet(2, {0.0, 0.0, 1.0, std::nan("")}), InvalidArgument);
    CHECK_THROWS_AS(SampleSet(1, {0.0, 1.0}), InvalidArgument); // dim too small

    // duplicate diagnostic names the offending rows
    try {
        SampleSet(2, {0.0, 0.0, 1.0, 1.0, 0.0, 0.0});
        FAIL("expected duplicate rejection");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("(0,2)") != std::string::npos);
    }

    SampleSet ok(2, {0.0, 0.0, 1.0, 1.0});
    CHECK(ok.size() == 2);
    CHECK(ok.dim() == 2);
}

TEST_CASE("kth_distance on a line") {
    // points 0, 1, 3 embedded in 2-D
    SampleSet s(2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
    NeighborIndex idx(s);
    std::vector<double> x{0.0, 0.0};
    CHECK(idx.kth_distance(x, 2, false) == doctest::Approx(1.0));
    CHECK(idx.kth_distance(x, 3, false) == doctest::Approx(3.0));
    CHECK(idx.kth_distance(x, 1, false) == 0.0);
    CHECK(idx.kth_distance(x, 1, true) == doctest::Approx(1.0));
    CHECK_THROWS_AS(idx.kth_distance(x, 4, false), InvalidArgument);
    CHECK_THROWS_AS(idx.kth_distance(x, 3, true), InvalidArgument);
    CHECK_THROWS_AS(idx.kth_distance(x, 0, false), InvalidArgument);
}

TEST_CASE("beyond_radius edges") {
    SampleSet s(2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
    NeighborIndex idx(s);
    std::vector<double> x{-0.5, 0.0};
    CHECK(idx.beyond_radius(x, 0.0) == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(idx.beyond_radius(x, 100.0).empty());
    // strict inequality: a point exactly at R is excluded
    std::vector<double> origin{0.0, 0.0};
    auto b = idx.beyond_radius(origin, 1.0);
    CHECK(b == std::vector<std::uint32_t>{2});
}

TEST_CASE("minimal and degenerate samples build valid indexes") {
    SampleSet two(2, {0.0, 0.0, 1.0, 1.0});
    NeighborIndex idx2(two);
    CHECK(idx2.size() == 2);
    std::vector<double> q{0.0, 0.0};
    CHECK(idx2.kth_distance(q, 2, false) == doctest::Approx(std::sqrt(2.0)));

    // collinear points
    SampleSet line(2, {0.0, 0.0, 1.0, 0.0, 2.0, 0.0});
    NeighborIndex idxl(line);
    CHECK(idxl.kth_distance(q, 3, false) == doctest::Approx(2.0));
}

TEST_CASE("index queries match the linear-scan oracle") {
    for (int dim : {2, 3}) {
        SampleSet s = random_sample(dim, 500, 11 + static_cast<std::uint64_t>(dim));
        NeighborIndex idx(s);
        BruteForce bf{s};
        Rng rng(99);

        // queries at sample points and at random points
        for (int t = 0; t < 40; ++t) {
            std::vector<double> x(static_cast<std::size_t>(dim));
            bool on_sample = t % 2 == 0;
            if (on_sample) {
                std::span<const double> p = s.point(static_cast<std::size_t>(t * 7 % 500));
                x.assign(p.begin(), p.end());
            } else {
                for (double& v : x) v = rng.gaussian();
            }
            for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{123}}) {
                CHECK(idx.kth_distance(x, k, false) == bf.kth(x, k, false));
                CHECK(idx.kth_distance(x, k, true) == bf.kth(x, k, true));
            }
            double R = idx.kth_distance(x, 17, false);
            CHECK(idx.beyond_radius(x, R) == bf.beyond(x, R));
            CHECK(idx.beyond_radius(x, 0.5) == bf.beyond(x, 0.5));
        }
    }
}

TEST_CASE("beyond of the kth radius leaves N-k points") {
    SampleSet s = random_sample(2, 300, 4242);
    NeighborIndex idx(s);
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x{rng.gaussian(), rng.gaussian()};
        for (std::size_t k : {std::size_t{1}, std::size_t{10}, std::size_t{299}}) {
            double R = idx.kth_distance(x, k, false);
            auto beyond = idx.beyond_radius(x, R);
            CHECK(beyond.size() == s.size() - k);
            // ascending order
            CHECK(std::is_sorted(beyond.begin(), beyond.end()));
        }
    }
}

TEST_CASE("N=2000 gaussian sample queries match brute force") {
    SampleSet s = random_sample(2, 2000, 20001);
    NeighborIndex idx(s);
    BruteForce bf{s};
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x{rng.gaussian(), rng.gaussian()};
        CHECK(idx.kth_distance(x, 40, false) == bf.kth(x, 40, false));
        double R = idx.kth_distance(x, 40, false);
        CHECK(idx.beyond_radius(x, R) == bf.beyond(x, R));
    }
}
