#include "greendens/solver.hpp"

#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"
#include "greendens/parallel.hpp"
#include "greendens/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace greendens {

namespace {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double squared_norm(std::span<const double> v) { return dot(v, v); }

inline void normalize(std::span<double> v) {
    double inv = 1.0 / std::sqrt(squared_norm(v));
    for (double& x : v) x *= inv;
}

struct SweepStats {
    double energy = 0.0;
    double mean_misalignment = 0.0;
};

// Energy and mean misalignment angle from a full field evaluation. Serial
// reduction in ascending i, so the result is thread-count independent.
SweepStats sweep_stats(const DipoleField& phi, const std::vector<double>& E) {
    const int dim = phi.dim;
    const std::size_t n = phi.rows();
    double dot_sum = 0.0;
    double angle_sum = 0.0;
    std::size_t valid = 0;
    std::vector<double> tang(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> pi = phi.row(i);
        std::span<const double> Ei{E.data() + i * static_cast<std::size_t>(dim),
                                   static_cast<std::size_t>(dim)};
        if (squared_norm(Ei) == 0.0) continue; // fully excluded point
        double d = dot(pi, Ei);
        dot_sum += d;
        for (int k = 0; k < dim; ++k) tang[static_cast<std::size_t>(k)] = Ei[k] - d * pi[k];
        double tn = std::sqrt(squared_norm(tang));
        angle_sum += std::atan2(tn, d);
        ++valid;
    }
    SweepStats st;
    st.energy = -dot_sum / static_cast<double>(n);
    st.mean_misalignment = valid > 0 ? angle_sum / static_cast<double>(valid) : 0.0;
    return st;
}

// Deterministic escape from the antiparallel stall: rotate 0.01 rad toward
// an index-seeded random axis. The tangential gradient vanishes there even
// though the point is an energy maximum.
void perturb_row(std::span<double> row, std::size_t i) {
    constexpr double kick = 0.01;
    Rng rng(splitmix64(0x517cc1b727220a95ULL ^ static_cast<std::uint64_t>(i)));
    const std::size_t dim = row.size();
    std::vector<double> axis(dim), tang(dim);
    for (;;) {
        for (double& a : axis) a = rng.gaussian();
        double d = 0.0;
        for (std::size_t k = 0; k < dim; ++k) d += axis[k] * row[k];
        for (std::size_t k = 0; k < dim; ++k) tang[k] = axis[k] - d * row[k];
        double tn2 = 0.0;
        for (double t : tang) tn2 += t * t;
        if (tn2 > 1e-16) {
            double inv = 1.0 / std::sqrt(tn2);
            for (std::size_t k = 0; k < dim; ++k)
                row[k] = std::cos(kick) * row[k] + std::sin(kick) * (tang[k] * inv);
            normalize(row);
            return;
        }
    }
}

// One synchronized rotation pass; E was computed against the field before
// any row changed.
void rotate_all(DipoleField& phi, const std::vector<double>& E, double step_cap) {
    const int dim = phi.dim;
    parallel_for(phi.rows(), [&](std::size_t i) {
        std::span<const double> Ei{E.data() + i * static_cast<std::size_t>(dim),
                                   static_cast<std::size_t>(dim)};
        double e2 = squared_norm(Ei);
        if (e2 == 0.0) return;
        std::span<double> row = phi.row(i);
        double c = dot(row, Ei) / std::sqrt(e2);
        if (c <= -1.0 + 1e-12) {
            perturb_row(row, i);
            return;
        }
        std::vector<double> next = rotate_toward(row, Ei, step_cap);
        std::copy(next.begin(), next.end(), row.begin());
    });
}

// Shared per-point evaluation core; writes scale * sum into out.
void scaled_field_sum_into(const SampleSet& s, const DipoleField& phi,
                           const double* x,
                           std::span<const std::uint32_t> excluded_sorted,
                           double scale, double* out) {
    const int dim = s.dim();
    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t n = s.size();
    const double c = kernel_prefactor(dim);
    const double* pts = s.data().data();
    const double* ph = phi.phi.data();
    for (std::size_t k = 0; k < d; ++k) out[k] = 0.0;
    thread_local std::vector<double> disp;
    disp.resize(d);
    std::size_t ep = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (ep < excluded_sorted.size() && excluded_sorted[ep] == j) {
            ++ep;
            continue;
        }
        const double* pj = pts + j * d;
        for (std::size_t k = 0; k < d; ++k) disp[k] = x[k] - pj[k];
        apply_dipole_add(disp.data(), ph + j * d, dim, c, out);
    }
    for (std::size_t k = 0; k < d; ++k) out[k] *= scale;
}

// All E_i against a frozen field. Exclusion sets depend only on the sample
// geometry, so they are built once and reused across sweeps.
class SweepEngine {
public:
    SweepEngine(const SampleSet& s, const NeighborIndex& idx, std::size_t n_discr)
        : s_(s),
          scale_(1.0 / (static_cast<double>(s.size()) * unit_sphere_surface(s.dim()))) {
        if (n_discr + 2 > s.size())
            throw InvalidArgument("exclusion count " + std::to_string(n_discr) +
                                  " too large for sample of " + std::to_string(s.size()));
        excluded_.resize(s.size());
        parallel_for(s.size(), [&](std::size_t i) {
            excluded_[i] = exclusion_set(s, idx, i, n_discr);
        });
    }

    void compute_all(const DipoleField& phi, std::vector<double>& E) const {
        const std::size_t d = static_cast<std::size_t>(s_.dim());
        E.resize(s_.size() * d);
        parallel_for(s_.size(), [&](std::size_t i) {
            scaled_field_sum_into(s_, phi, s_.point(i).data(), excluded_[i], scale_,
                                  E.data() + i * d);
        });
    }

private:
    const SampleSet& s_;
    double scale_;
    std::vector<std::vector<std::uint32_t>> excluded_;
};

void check_field_matches(const SampleSet& s, const DipoleField& phi) {
    if (phi.dim != s.dim())
        throw DimensionError("dipole field dimension does not match sample");
    if (phi.rows() != s.size())
        throw InvalidArgument("dipole field row count does not match sample size");
}

} // namespace

void FitConfig::validate(int dim, std::size_t n_points) const {
    require_dim(dim);
    if (n_large_fit < 1)
        throw InvalidArgument("fit config: n_large_fit must be positive");
    if (!(step_cap > 0.0) || !(step_cap < std::numbers::pi))
        throw InvalidArgument("fit config: step_cap must lie in (0, pi)");
    if (!(tolerance > 0.0))
        throw InvalidArgument("fit config: tolerance must be positive");
    if (max_iterations < 1)
        throw InvalidArgument("fit config: max_iterations must be positive");
    if (restarts < 0)
        throw InvalidArgument("fit config: restarts must be nonnegative");
    if (n_discr(dim) + 2 > n_points)
        throw InvalidArgument("fit config: dim * n_large_fit = " +
                              std::to_string(n_discr(dim)) +
                              " exceeds N - 2 for N = " + std::to_string(n_points));
}

DipoleField::DipoleField(int dim_, std::vector<double> phi_)
    : dim(dim_), phi(std::move(phi_)) {
    require_dim(dim);
    if (phi.size() % static_cast<std::size_t>(dim) != 0)
        throw InvalidArgument("dipole field: data size is not a multiple of the dimension");
}

void DipoleField::check_unit_norms() const {
    for (std::size_t i = 0; i < rows(); ++i) {
        double n2 = squared_norm(row(i));
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
            throw InvalidArgument("dipole field: row " + std::to_string(i) +
                                  " is not unit length");
    }
}

DipoleField init_field(std::size_t n_points, int dim, std::uint64_t seed) {
    require_dim(dim);
    if (n_points < 2)
        throw InvalidArgument("init_field: need at least 2 points");
    Rng rng(derive_seed(seed, kSeedDomainDipoleField));
    DipoleField f;
    f.dim = dim;
    f.phi.resize(n_points * static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n_points; ++i) {
        std::span<double> row = f.row(i);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (double& x : row) {
                x = rng.gaussian();
                n2 += x * x;
            }
        } while (n2 < 1e-24);
        normalize(row);
    }
    return f;
}

std::vector<double> scaled_field_sum(const SampleSet& s, const DipoleField& phi,
                                     std::span<const double> x,
                                     std::span<const std::uint32_t> excluded_sorted,
                                     double scale) {
    check_field_matches(s, phi);
    if (x.size() != static_cast<std::size_t>(s.dim()))
        throw DimensionError("scaled_field_sum: query dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(s.dim()));
    scaled_field_sum_into(s, phi, x.data(), excluded_sorted, scale, out.data());
    return out;
}

std::vector<std::uint32_t> exclusion_set(const SampleSet& s, const NeighborIndex& idx,
                                         std::size_t i, std::size_t n_discr) {
    if (i >= s.size())
        throw InvalidArgument("exclusion_set: point index out of range");
    if (n_discr == 0) return {static_cast<std::uint32_t>(i)};
    double R = idx.kth_distance(s.point(i), n_discr, /*exclude_self=*/true);
    // i itself sits at distance zero, inside the closed ball.
    return idx.within_closed_ball(s.point(i), R);
}

std::vector<double> compute_field(const SampleSet& s, const DipoleField& phi,
                                  const NeighborIndex& idx, std::size_t n_discr,
                                  std::size_t i) {
    check_field_matches(s, phi);
    if (n_discr + 2 > s.size())
        throw InvalidArgument("compute_field: exclusion count too large for sample");
    std::vector<std::uint32_t> ex = exclusion_set(s, idx, i, n_discr);
    double scale = 1.0 / (static_cast<double>(s.size()) * unit_sphere_surface(s.dim()));
    return scaled_field_sum(s, phi, s.point(i), ex, scale);
}

double energy(const SampleSet& s, const DipoleField& phi, const NeighborIndex& idx,
              std::size_t n_discr) {
    check_field_matches(s, phi);
    SweepEngine engine(s, idx, n_discr);
    std::vector<double> E;
    engine.compute_all(phi, E);
    return sweep_stats(phi, E).energy;
}

std::vector<double> rotate_toward(std::span<const double> phi,
                                  std::span<const double> E, double step_cap) {
    if (phi.size() != E.size())
        throw DimensionError("rotate_toward: vector sizes differ");
    if (!(step_cap > 0.0))
        throw InvalidArgument("rotate_toward: step cap must be positive");
    double p2 = squared_norm(phi);
    if (p2 == 0.0)
        throw InvalidArgument("rotate_toward: zero-norm phi");
    std::vector<double> out(phi.begin(), phi.end());
    double e2 = squared_norm(E);
    if (e2 == 0.0) return out;
    double en = std::sqrt(e2);
    double d = dot(phi, E);
    double cosang = std::clamp(d / en, -1.0, 1.0);
    double angle = std::acos(cosang);
    if (angle == 0.0) return out;
    if (angle <= step_cap) {
        // Full rotation stays under the cap: land exactly on the unit E.
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = E[k] / en;
        return out;
    }
    std::vector<double> tang(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) tang[k] = E[k] - d * phi[k];
    double tn = std::sqrt(squared_norm(tang));
    if (!(tn > 1e-13 * en)) return out; // antiparallel: no tangential direction
    double ca = std::cos(step_cap), sa = std::sin(step_cap);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = ca * phi[k] + sa * (tang[k] / tn);
    normalize(out);
    return out;
}

void sweep_field(const SampleSet& s, const NeighborIndex& idx, DipoleField& phi,
                 std::size_t n_discr, double step_cap) {
    check_field_matches(s, phi);
    SweepEngine engine(s, idx, n_discr);
    std::vector<double> E;
    engine.compute_all(phi, E);
    rotate_all(phi, E, step_cap);
}

std::pair<DipoleField, FitReport> fit(const SampleSet& s, const NeighborIndex& idx,
                                      const FitConfig& cfg) {
    cfg.validate(s.dim(), s.size());
    SweepEngine engine(s, idx, cfg.n_discr(s.dim()));

    DipoleField best;
    FitReport best_report;
    double best_energy = std::numeric_limits<double>::infinity();
    std::vector<double> restart_energies;

    const int runs = cfg.restarts + 1;
    for (int r = 0; r < runs; ++r) {
        DipoleField phi = init_field(s.size(), s.dim(),
                                     cfg.seed ^ static_cast<std::uint64_t>(r));
        std::vector<double> E;
        engine.compute_all(phi, E);
        SweepStats st = sweep_stats(phi, E);
        double energy_initial = st.energy;
        int iters = 0;
        while (st.mean_misalignment >= cfg.tolerance && iters < cfg.max_iterations) {
            rotate_all(phi, E, cfg.step_cap);
            ++iters;
            engine.compute_all(phi, E);
            st = sweep_stats(phi, E);
        }
        restart_energies.push_back(st.energy);
        if (st.energy < best_energy) {
            best_energy = st.energy;
            best = std::move(phi);
            best_report.iterations_used = iters;
            best_report.energy_initial = energy_initial;
            best_report.energy_final = st.energy;
            best_report.mean_misalignment = st.mean_misalignment;
            best_report.converged = st.mean_misalignment < cfg.tolerance;
        }
    }
    best_report.restart_energies = std::move(restart_energies);
    return {std::move(best), std::move(best_report)};
}

std::pair<DipoleField, FitReport> fit(const SampleSet& s, const FitConfig& cfg) {
    NeighborIndex idx(s);
    return fit(s, idx, cfg);
}

} // namespace greendens
