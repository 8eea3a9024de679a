#include "greendens/validation.hpp"

#include "greendens/errors.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace greendens;

TEST_CASE("shell integral vanishes") {
    SUBCASE("n=2 quadrature") {
        double rel = shell_null_integral(2, 1.0, 100000, std::vector{1.0, 0.0});
        CHECK(rel < 1e-3);
        double rel2 = shell_null_integral(2, 0.37, 100000, std::vector{0.6, 0.8});
        CHECK(rel2 < 1e-3);
    }
    SUBCASE("n=3 monte carlo") {
        double rel = shell_null_integral(3, 1.0, 100000, std::vector{0.0, 0.0, 1.0}, 11);
        CHECK(rel < 1e-2);
    }
    SUBCASE("more points, more cancellation") {
        double coarse = shell_null_integral(3, 1.0, 25000, std::vector{0.0, 0.0, 1.0}, 13);
        double fine = shell_null_integral(3, 1.0, 400000, std::vector{0.0, 0.0, 1.0}, 13);
        CHECK(fine < coarse);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(shell_null_integral(2, 0.0, 1000, std::vector{1.0, 0.0}),
                        InvalidArgument);
        CHECK_THROWS_AS(shell_null_integral(2, 1.0, 10, std::vector{1.0, 0.0}),
                        InvalidArgument);
        CHECK_THROWS_AS(shell_null_integral(2, 1.0, 1000, std::vector{2.0, 0.0}),
                        InvalidArgument);
    }
}

TEST_CASE("finite-difference kernel check") {
    CHECK(kernel_fd_check(2, 100, 1) < 1e-5);
    CHECK(kernel_fd_check(3, 100, 2) < 1e-5);
    CHECK(kernel_fd_check(5, 100, 3) < 1e-5);
}

TEST_CASE("normalization of the fitted gaussian model") {
    const DensityModel& m = small_gauss_model();
    GridSpec g;
    g.lo = {-5.0, -5.0};
    g.hi = {5.0, 5.0};
    g.points_per_axis = {101, 101};
    double coarse = normalization_check(m, g);
    CHECK(coarse > 0.75);
    CHECK(coarse < 1.25);

    g.points_per_axis = {201, 201};
    double fine = normalization_check(m, g);
    CHECK(std::abs(fine - coarse) < 0.05);
}

TEST_CASE("normalization is invariant under coordinate scaling") {
    const DensityModel& m = small_gauss_model();
    std::vector<double> sp = m.sample().data();
    for (double& v : sp) v *= 2.0;
    DensityModel scaled(SampleSet(2, std::move(sp)), m.field(), m.fit_config(),
                        m.n_large_eval(), m.report());
    GridSpec g;
    g.lo = {-5.0, -5.0};
    g.hi = {5.0, 5.0};
    g.points_per_axis = {101, 101};
    double base = normalization_check(m, g);
    GridSpec g2;
    g2.lo = {-10.0, -10.0};
    g2.hi = {10.0, 10.0};
    g2.points_per_axis = {101, 101};
    double after = normalization_check(scaled, g2);
    CHECK(std::abs(after - base) < 0.05);
}

TEST_CASE("default normalization grid pads the bounding box") {
    const SampleSet& s = small_gauss_model().sample();
    GridSpec g = default_normalization_grid(s, 51);
    for (int k = 0; k < 2; ++k) {
        double mn = 1e18, mx = -1e18;
        for (std::size_t i = 0; i < s.size(); ++i) {
            mn = std::min(mn, s.point(i)[static_cast<std::size_t>(k)]);
            mx = std::max(mx, s.point(i)[static_cast<std::size_t>(k)]);
        }
        CHECK(g.lo[static_cast<std::size_t>(k)] < mn - 2.0);
        CHECK(g.hi[static_cast<std::size_t>(k)] > mx + 2.0);
    }
    CHECK(g.total_points() == 51u * 51u);
}

TEST_CASE("validation battery passes and reports") {
    std::ostringstream out;
    bool ok = run_validation(std::nullopt, 7, out);
    CHECK(ok);
    std::string text = out.str();
    CHECK(text.find("FAIL") == std::string::npos);
    CHECK(text.find("kernel-fd") != std::string::npos);
    CHECK(text.find("shell-null") != std::string::npos);
    CHECK(text.find("all checks passed") != std::string::npos);
}
