#include "greendens/validation.hpp"

#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"
#include "greendens/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

namespace greendens {

namespace {

// Radial potential the kernel differentiates, written independently of
// kernel_core: |d|^-(n-2) for n >= 3, -ln|d| for n = 2.
double potential(std::span<const double> d, int dim) {
    double r2 = 0.0;
    for (double x : d) r2 += x * x;
    if (dim == 2) return -0.5 * std::log(r2);
    return std::pow(r2, -0.5 * static_cast<double>(dim - 2));
}

std::vector<double> random_unit(int dim, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& x : v) {
            x = rng.gaussian();
            n2 += x * x;
        }
    } while (n2 < 1e-24);
    double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= inv;
    return v;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

} // namespace

double shell_null_integral(int dim, double radius, std::size_t quad_points,
                           std::span<const double> phi, std::uint64_t seed) {
    require_dim(dim);
    if (!(radius > 0.0)) throw InvalidArgument("shell integral: radius must be positive");
    if (quad_points < 100) throw InvalidArgument("shell integral: need at least 100 points");
    if (phi.size() != static_cast<std::size_t>(dim))
        throw DimensionError("shell integral: phi dimension mismatch");
    double pn2 = 0.0;
    for (double x : phi) pn2 += x * x;
    if (std::abs(std::sqrt(pn2) - 1.0) > 1e-9)
        throw InvalidArgument("shell integral: phi must be a unit vector");

    std::vector<double> sum(static_cast<std::size_t>(dim), 0.0);
    double mag = 0.0;
    std::vector<double> p(static_cast<std::size_t>(dim));
    Rng rng(seed);
    for (std::size_t m = 0; m < quad_points; ++m) {
        if (dim == 2) {
            double theta = 2.0 * std::numbers::pi *
                           (static_cast<double>(m) + 0.5) / static_cast<double>(quad_points);
            p[0] = radius * std::cos(theta);
            p[1] = radius * std::sin(theta);
        } else {
            std::vector<double> u = random_unit(dim, rng);
            for (int k = 0; k < dim; ++k) p[static_cast<std::size_t>(k)] = radius * u[static_cast<std::size_t>(k)];
        }
        std::vector<double> v = apply_dipole(p, phi, dim);
        double v2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            sum[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)];
            v2 += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
        }
        mag += std::sqrt(v2);
    }
    double s2 = 0.0;
    for (double x : sum) s2 += x * x;
    return std::sqrt(s2) / mag;
}

double kernel_fd_check(int dim, std::size_t samples, std::uint64_t seed) {
    require_dim(dim);
    if (samples < 1) throw InvalidArgument("fd check: needs at least one sample");
    const double h = 1e-4;
    Rng rng(seed);
    double worst = 0.0;
    std::vector<double> r(static_cast<std::size_t>(dim));
    std::vector<double> d(static_cast<std::size_t>(dim));
    for (std::size_t t = 0; t < samples; ++t) {
        std::vector<double> dir = random_unit(dim, rng);
        double radius = rng.uniform(0.5, 2.0);
        for (int k = 0; k < dim; ++k) r[static_cast<std::size_t>(k)] = radius * dir[static_cast<std::size_t>(k)];
        std::vector<double> K = dipole_kernel(r, dim);
        double scale = max_abs(K);
        for (int u = 0; u < dim; ++u) {
            for (int v = 0; v < dim; ++v) {
                // central 4-point mixed derivative; one step on the x side
                // (+e_u) and one on the x' side (-e_v on the displacement)
                double acc = 0.0;
                for (int su = -1; su <= 1; su += 2) {
                    for (int sv = -1; sv <= 1; sv += 2) {
                        for (int k = 0; k < dim; ++k) d[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)];
                        d[static_cast<std::size_t>(u)] += su * h;
                        d[static_cast<std::size_t>(v)] -= sv * h;
                        acc += su * sv * potential(d, dim);
                    }
                }
                double fd = acc / (4.0 * h * h);
                double dev = std::abs(fd - K[static_cast<std::size_t>(u) * dim + v]) / scale;
                worst = std::max(worst, dev);
            }
        }
    }
    return worst;
}

std::size_t GridSpec::total_points() const {
    std::size_t t = 1;
    for (int p : points_per_axis) t *= static_cast<std::size_t>(p);
    return t;
}

GridSpec default_normalization_grid(const SampleSet& s, int points_per_axis) {
    if (points_per_axis < 2)
        throw InvalidArgument("normalization grid: need at least 2 points per axis");
    const int dim = s.dim();
    GridSpec g;
    g.lo.resize(static_cast<std::size_t>(dim));
    g.hi.resize(static_cast<std::size_t>(dim));
    g.points_per_axis.assign(static_cast<std::size_t>(dim), points_per_axis);
    for (int k = 0; k < dim; ++k) {
        double mn = s.point(0)[static_cast<std::size_t>(k)];
        double mx = mn;
        double mean = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double v = s.point(i)[static_cast<std::size_t>(k)];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            mean += v;
        }
        mean /= static_cast<double>(s.size());
        double var = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double dv = s.point(i)[static_cast<std::size_t>(k)] - mean;
            var += dv * dv;
        }
        double sd = std::sqrt(var / static_cast<double>(s.size()));
        g.lo[static_cast<std::size_t>(k)] = mn - 3.0 * sd;
        g.hi[static_cast<std::size_t>(k)] = mx + 3.0 * sd;
    }
    return g;
}

double normalization_check(const DensityModel& m, const GridSpec& grid) {
    const int dim = m.dim();
    if (grid.lo.size() != static_cast<std::size_t>(dim) ||
        grid.hi.size() != static_cast<std::size_t>(dim) ||
        grid.points_per_axis.size() != static_cast<std::size_t>(dim))
        throw DimensionError("normalization check: grid dimension mismatch");
    for (int k = 0; k < dim; ++k) {
        if (grid.points_per_axis[static_cast<std::size_t>(k)] < 2)
            throw InvalidArgument("normalization check: need >= 2 points per axis");
        if (!(grid.hi[static_cast<std::size_t>(k)] > grid.lo[static_cast<std::size_t>(k)]))
            throw InvalidArgument("normalization check: degenerate grid extent");
    }

    const std::size_t total = grid.total_points();
    std::vector<double> step(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k)
        step[static_cast<std::size_t>(k)] =
            (grid.hi[static_cast<std::size_t>(k)] - grid.lo[static_cast<std::size_t>(k)]) /
            static_cast<double>(grid.points_per_axis[static_cast<std::size_t>(k)] - 1);

    PointMatrix nodes;
    nodes.dim = dim;
    nodes.data.resize(total * static_cast<std::size_t>(dim));
    std::vector<double> weight(total);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    for (std::size_t t = 0; t < total; ++t) {
        double w = 1.0;
        for (int k = 0; k < dim; ++k) {
            int i = idx[static_cast<std::size_t>(k)];
            nodes.data[t * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)] =
                grid.lo[static_cast<std::size_t>(k)] + step[static_cast<std::size_t>(k)] * i;
            double wk = step[static_cast<std::size_t>(k)];
            if (i == 0 || i == grid.points_per_axis[static_cast<std::size_t>(k)] - 1) wk *= 0.5;
            w *= wk;
        }
        weight[t] = w;
        for (int k = dim - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < grid.points_per_axis[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    std::vector<double> est = m.estimate_batch(nodes);
    double integral = 0.0;
    for (std::size_t t = 0; t < total; ++t) integral += weight[t] * est[t];
    return integral;
}

bool run_validation(std::optional<int> dim, std::uint64_t seed, std::ostream& out) {
    std::vector<int> dims = dim ? std::vector<int>{*dim} : std::vector<int>{2, 3, 5};
    bool ok = true;
    auto verdict = [&ok](bool pass) {
        if (!pass) ok = false;
        return pass ? "PASS" : "FAIL";
    };

    for (int n : dims) {
        double dev = kernel_fd_check(n, 100, seed ^ static_cast<std::uint64_t>(n));
        out << "kernel-fd          n=" << n << "  max relative deviation = " << sci(dev)
            << "  (threshold 1e-05)  " << verdict(dev < 1e-5) << "\n";
    }

    for (int n : dims) {
        Rng rng(splitmix64(seed) ^ static_cast<std::uint64_t>(n));
        double sym = 0.0, par = 0.0, tra = 0.0, sca = 0.0;
        std::vector<double> r(static_cast<std::size_t>(n));
        std::vector<double> neg(static_cast<std::size_t>(n));
        std::vector<double> lr(static_cast<std::size_t>(n));
        for (int t = 0; t < 50; ++t) {
            std::vector<double> dir = random_unit(n, rng);
            double radius = rng.uniform(0.5, 2.0);
            for (int k = 0; k < n; ++k) {
                r[static_cast<std::size_t>(k)] = radius * dir[static_cast<std::size_t>(k)];
                neg[static_cast<std::size_t>(k)] = -r[static_cast<std::size_t>(k)];
            }
            std::vector<double> K = dipole_kernel(r, n);
            std::vector<double> Kn = dipole_kernel(neg, n);
            double scale = max_abs(K);
            double trace = 0.0;
            for (int u = 0; u < n; ++u) {
                trace += K[static_cast<std::size_t>(u) * n + u];
                for (int v = 0; v < n; ++v) {
                    sym = std::max(sym, std::abs(K[static_cast<std::size_t>(u) * n + v] -
                                                 K[static_cast<std::size_t>(v) * n + u]) / scale);
                    par = std::max(par, std::abs(K[static_cast<std::size_t>(u) * n + v] -
                                                 Kn[static_cast<std::size_t>(u) * n + v]) / scale);
                }
            }
            tra = std::max(tra, std::abs(trace) / scale);
            for (double lambda : {0.5, 2.0, 10.0}) {
                for (int k = 0; k < n; ++k) lr[static_cast<std::size_t>(k)] = lambda * r[static_cast<std::size_t>(k)];
                std::vector<double> Kl = dipole_kernel(lr, n);
                double f = std::pow(lambda, -static_cast<double>(n));
                double ls = max_abs(Kl);
                for (std::size_t e = 0; e < Kl.size(); ++e)
                    sca = std::max(sca, std::abs(Kl[e] - f * K[e]) / ls);
            }
        }
        bool pass = sym <= 1e-12 && par <= 1e-12 && tra <= 1e-12 && sca <= 1e-12;
        out << "kernel-invariants  n=" << n << "  symmetry=" << sci(sym)
            << " parity=" << sci(par) << " trace=" << sci(tra) << " scaling=" << sci(sca)
            << "  (threshold 1e-12)  " << verdict(pass) << "\n";
    }

    std::vector<int> shell_dims = dim ? std::vector<int>{*dim} : std::vector<int>{2, 3};
    for (int n : shell_dims) {
        Rng prng(splitmix64(seed ^ 0x77ULL) ^ static_cast<std::uint64_t>(n));
        std::vector<double> phi = random_unit(n, prng);
        double rel = shell_null_integral(n, 1.0, 100000, phi, seed ^ 0x5555ULL);
        double threshold = n == 2 ? 1e-3 : 1e-2;
        out << "shell-null         n=" << n << "  relative magnitude     = " << sci(rel)
            << "  (threshold " << (n == 2 ? "1e-03" : "1e-02") << ")  "
            << verdict(rel < threshold) << "\n";
    }

    out << (ok ? "validation: all checks passed" : "validation: FAILURES above") << "\n";
    return ok;
}

} // namespace greendens
