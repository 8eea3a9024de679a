#include "greendens/solver.hpp"

#include "greendens/datagen.hpp"
#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"
#include "greendens/parallel.hpp"
#include "greendens/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace greendens;

namespace {

// Dense double-loop oracle for E_i: sort all distances, exclude the
// n_discr-th-neighbour ball, sum full kernel matrices.
std::vector<double> dense_field(const SampleSet& s, const DipoleField& phi,
                                std::size_t i, std::size_t n_discr) {
    const int dim = s.dim();
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        double r2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            double d = s.point(i)[static_cast<std::size_t>(k)] -
                       s.point(j)[static_cast<std::size_t>(k)];
            r2 += d * d;
        }
        dist.emplace_back(std::sqrt(r2), j);
    }
    std::sort(dist.begin(), dist.end());
    double R = n_discr > 0 ? dist.at(n_discr - 1).first : 0.0;

    std::vector<double> E(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        std::vector<double> d(static_cast<std::size_t>(dim));
        double r2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            d[static_cast<std::size_t>(k)] = s.point(i)[static_cast<std::size_t>(k)] -
                                             s.point(j)[static_cast<std::size_t>(k)];
            r2 += d[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(k)];
        }
        if (n_discr > 0 && !(std::sqrt(r2) > R)) continue;
        std::vector<double> K = dipole_kernel(d, dim);
        for (int u = 0; u < dim; ++u) {
            double acc = 0.0;
            for (int v = 0; v < dim; ++v)
                acc += K[static_cast<std::size_t>(u) * dim + v] *
                       phi.row(j)[static_cast<std::size_t>(v)];
            E[static_cast<std::size_t>(u)] += acc;
        }
    }
    double scale = 1.0 / (static_cast<double>(s.size()) * unit_sphere_surface(dim));
    for (double& e : E) e *= scale;
    return E;
}

const double kInv8Pi = 1.0 / (8.0 * std::numbers::pi);

// x1 - x2 = (1,0,0); phi as given.
SampleSet two_point_sample() { return SampleSet(3, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}); }

} // namespace

TEST_CASE("init_field rows are unit and deterministic") {
    DipoleField a = init_field(100, 3, 42);
    DipoleField b = init_field(100, 3, 42);
    CHECK(a.phi == b.phi);
    a.check_unit_norms();
    DipoleField c = init_field(100, 3, 43);
    CHECK(a.phi != c.phi);
}

TEST_CASE("init_field is independent of a sample drawn with the same seed") {
    // same user seed, different module streams: the field must not be the
    // normalized sample (that would start the fit at the radial optimum)
    const std::size_t n = 2000;
    SampleSet s = sample_gaussian(2, n, 1.0, 42);
    DipoleField f = init_field(n, 2, 42);
    double align = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = s.point(i)[0], y = s.point(i)[1];
        double r = std::sqrt(x * x + y * y);
        align += f.row(i)[0] * (x / r) + f.row(i)[1] * (y / r);
    }
    align /= static_cast<double>(n);
    CHECK(std::abs(align) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("init_field is uniform on the sphere") {
    const std::size_t n = 10000;
    DipoleField f = init_field(n, 3, 7);
    for (int k = 0; k < 3; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += f.row(i)[static_cast<std::size_t>(k)];
        mean /= static_cast<double>(n);
        CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("two-point field and energy") {
    SampleSet s = two_point_sample();
    NeighborIndex idx(s);
    DipoleField phi(3, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0});

    std::vector<double> E1 = compute_field(s, phi, idx, 0, 0);
    CHECK(E1[0] == 0.0);
    CHECK(E1[1] == 0.0);
    CHECK(E1[2] == doctest::Approx(kInv8Pi).epsilon(1e-14));

    // hand-evaluated two-term sum: both points contribute phi.E = 1/(8 pi)
    double U = energy(s, phi, idx, 0);
    CHECK(U == doctest::Approx(-kInv8Pi).epsilon(1e-14));

    std::vector<double> d1 = dense_field(s, phi, 0, 0);
    std::vector<double> d2 = dense_field(s, phi, 1, 0);
    double hand = -0.5 * (phi.row(0)[2] * d1[2] + phi.row(1)[2] * d2[2]);
    CHECK(U == doctest::Approx(hand).epsilon(1e-14));
}

TEST_CASE("empty kernel sum gives the zero vector and zero energy") {
    SampleSet s = two_point_sample();
    DipoleField phi(3, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0});
    std::vector<std::uint32_t> all{0, 1};
    std::vector<double> v = scaled_field_sum(s, phi, s.point(0), all, 1.0);
    CHECK(v == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("compute_field matches the dense oracle on small systems") {
    for (int dim : {2, 3}) {
        Rng rng(120 + static_cast<std::uint64_t>(dim));
        std::vector<double> pts(10 * static_cast<std::size_t>(dim));
        for (double& x : pts) x = rng.gaussian();
        SampleSet s(dim, std::move(pts));
        NeighborIndex idx(s);
        DipoleField phi = init_field(10, dim, 99);
        for (std::size_t n_discr : {std::size_t{0}, std::size_t{2}, std::size_t{8}}) {
            for (std::size_t i = 0; i < 10; ++i) {
                std::vector<double> a = compute_field(s, phi, idx, n_discr, i);
                std::vector<double> b = dense_field(s, phi, i, n_discr);
                double scale = 0.0;
                for (double x : b) scale = std::max(scale, std::abs(x));
                for (std::size_t k = 0; k < a.size(); ++k)
                    CHECK(std::abs(a[k] - b[k]) <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("compute_field rejects oversized exclusion counts") {
    SampleSet s = two_point_sample();
    NeighborIndex idx(s);
    DipoleField phi = init_field(2, 3, 0);
    CHECK_THROWS_AS(compute_field(s, phi, idx, 1, 0), InvalidArgument);
}

TEST_CASE("rotate_toward") {
    SUBCASE("aligned fixed point") {
        std::vector<double> out = rotate_toward(std::vector{1.0, 0.0}, std::vector{2.0, 0.0}, 0.1);
        CHECK(out == std::vector{1.0, 0.0});
    }
    SUBCASE("perpendicular field, cap binds") {
        std::vector<double> out = rotate_toward(std::vector{1.0, 0.0}, std::vector{0.0, 1.0}, 0.1);
        CHECK(out[0] == doctest::Approx(std::cos(0.1)).epsilon(1e-14));
        CHECK(out[1] == doctest::Approx(std::sin(0.1)).epsilon(1e-14));
    }
    SUBCASE("no overshoot inside the cap") {
        std::vector<double> E{std::cos(0.05), std::sin(0.05)};
        std::vector<double> out = rotate_toward(std::vector{1.0, 0.0}, E, 0.1);
        double en = std::sqrt(E[0] * E[0] + E[1] * E[1]);
        CHECK(out[0] == doctest::Approx(E[0] / en).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(E[1] / en).epsilon(1e-15));
    }
    SUBCASE("zero field leaves phi") {
        std::vector<double> out = rotate_toward(std::vector{0.0, 1.0}, std::vector{0.0, 0.0}, 0.1);
        CHECK(out == std::vector{0.0, 1.0});
    }
    SUBCASE("antiparallel leaves phi (handled by the sweep)") {
        std::vector<double> out = rotate_toward(std::vector{1.0, 0.0}, std::vector{-3.0, 0.0}, 0.1);
        CHECK(out == std::vector{1.0, 0.0});
    }
    SUBCASE("zero-norm phi rejected") {
        CHECK_THROWS_AS(rotate_toward(std::vector{0.0, 0.0}, std::vector{1.0, 0.0}, 0.1),
                        InvalidArgument);
    }
}

TEST_CASE("aligned two-point system is a sweep fixed point") {
    SampleSet s = two_point_sample();
    NeighborIndex idx(s);
    DipoleField phi(3, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0});
    DipoleField before = phi;
    sweep_field(s, idx, phi, 0, 0.1);
    CHECK(phi.phi == before.phi);
}

TEST_CASE("antiparallel stall is perturbed, then converges") {
    SampleSet s = two_point_sample();
    NeighborIndex idx(s);
    // phi_1 antiparallel to its induced field
    DipoleField phi(3, {0.0, 0.0, -1.0, 0.0, 0.0, 1.0});
    DipoleField before = phi;
    sweep_field(s, idx, phi, 0, 0.1);
    CHECK(phi.phi != before.phi);
    phi.check_unit_norms();

    for (int t = 0; t < 400; ++t) sweep_field(s, idx, phi, 0, 0.1);
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> E = compute_field(s, phi, idx, 0, i);
        double dot = 0.0, en = 0.0, pn = 0.0;
        for (int k = 0; k < 3; ++k) {
            dot += phi.row(i)[static_cast<std::size_t>(k)] * E[static_cast<std::size_t>(k)];
            en += E[static_cast<std::size_t>(k)] * E[static_cast<std::size_t>(k)];
            pn += phi.row(i)[static_cast<std::size_t>(k)] * phi.row(i)[static_cast<std::size_t>(k)];
        }
        CHECK(dot / std::sqrt(en * pn) > 0.999);
    }
}

TEST_CASE("energy decreases after one sweep for nearly all seeds") {
    int decreased = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        Rng rng(1000 + static_cast<std::uint64_t>(t));
        std::vector<double> pts(30 * 2);
        for (double& x : pts) x = rng.gaussian();
        SampleSet s(2, std::move(pts));
        NeighborIndex idx(s);
        DipoleField phi = init_field(30, 2, 5000 + static_cast<std::uint64_t>(t));
        double u0 = energy(s, phi, idx, 4);
        sweep_field(s, idx, phi, 4, 0.1);
        double u1 = energy(s, phi, idx, 4);
        if (u1 < u0) ++decreased;
    }
    CHECK(decreased >= 95);
}

TEST_CASE("fit converges on a small gaussian sample") {
    SampleSet s = sample_gaussian(2, 300, 1.0, 31);
    NeighborIndex idx(s);
    FitConfig cfg;
    cfg.n_large_fit = 10;
    cfg.restarts = 1;
    cfg.max_iterations = 800;
    cfg.seed = 77;
    // small systems settle into a synchronized micro-oscillation of the
    // Jacobi sweep; its amplitude here sits between 1e-3 and 2e-3
    cfg.tolerance = 2e-3;
    auto [phi, report] = fit(s, idx, cfg);

    CHECK(report.converged);
    CHECK(report.mean_misalignment < cfg.tolerance);
    CHECK(report.energy_final <= report.energy_initial);
    CHECK(report.restart_energies.size() == 2);
    phi.check_unit_norms();

    // alignment sign after convergence validates the kernel sign convention
    std::size_t nd = cfg.n_discr(2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> E = compute_field(s, phi, idx, nd, i);
        double dot = 0.0, e2 = 0.0;
        for (int k = 0; k < 2; ++k) {
            dot += phi.row(i)[static_cast<std::size_t>(k)] * E[static_cast<std::size_t>(k)];
            e2 += E[static_cast<std::size_t>(k)] * E[static_cast<std::size_t>(k)];
        }
        if (e2 > 0.0) CHECK(dot >= 0.0);
    }
}

TEST_CASE("fit is deterministic in the seed and across thread counts") {
    SampleSet s = sample_gaussian(2, 120, 1.0, 8);
    FitConfig cfg;
    cfg.n_large_fit = 5;
    cfg.restarts = 0;
    cfg.max_iterations = 50;
    cfg.seed = 21;

    set_thread_count(1);
    auto [phi1, rep1] = fit(s, cfg);
    set_thread_count(4);
    auto [phi4, rep4] = fit(s, cfg);
    set_thread_count(0);
    auto [phi0, rep0] = fit(s, cfg);

    CHECK(phi1.phi == phi4.phi);
    CHECK(phi1.phi == phi0.phi);
    CHECK(rep1.energy_final == rep4.energy_final);
    CHECK(rep1.iterations_used == rep4.iterations_used);
    CHECK(rep1.mean_misalignment == rep4.mean_misalignment);
}

TEST_CASE("fit config validation") {
    FitConfig cfg;
    cfg.n_large_fit = 0;
    CHECK_THROWS_AS(cfg.validate(2, 100), InvalidArgument);
    cfg.n_large_fit = 10;
    cfg.step_cap = 4.0;
    CHECK_THROWS_AS(cfg.validate(2, 100), InvalidArgument);
    cfg.step_cap = 0.1;
    cfg.tolerance = 0.0;
    CHECK_THROWS_AS(cfg.validate(2, 100), InvalidArgument);
    cfg.tolerance = 1e-3;
    CHECK_THROWS_AS(cfg.validate(2, 20), InvalidArgument); // N_discr = 20 > N - 2
    CHECK_NOTHROW(cfg.validate(2, 22));
}
