#ifndef GREENDENS_SOLVER_HPP
#define GREENDENS_SOLVER_HPP

#include "greendens/neighbors.hpp"
#include "greendens/sample.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace greendens {

// Solver parameters. N_discr, the per-point exclusion count used while
// fitting, is derived as dim * n_large_fit.
struct FitConfig {
    int n_large_fit = 20;       // target points in the stable shell
    double step_cap = 0.1;      // max angular change per sweep, radians
    double tolerance = 1e-3;    // mean misalignment angle for convergence
    int max_iterations = 2000;
    int restarts = 3;           // additional seeded starts beyond the first
    std::uint64_t seed = 1;

    std::size_t n_discr(int dim) const {
        return static_cast<std::size_t>(dim) * static_cast<std::size_t>(n_large_fit);
    }
    // Throws InvalidArgument when a field is out of range or when
    // dim * n_large_fit > N - 2.
    void validate(int dim, std::size_t n_points) const;
};

// One unit vector per sample point; the fitted parameters. Row norms stay
// within 1e-9 of 1 through every operation.
struct DipoleField {
    int dim = 0;
    std::vector<double> phi; // rows() x dim, row-major

    DipoleField() = default;
    DipoleField(int dim_, std::vector<double> phi_);

    std::size_t rows() const { return dim == 0 ? 0 : phi.size() / static_cast<std::size_t>(dim); }
    std::span<const double> row(std::size_t i) const {
        return {phi.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    std::span<double> row(std::size_t i) {
        return {phi.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    // Throws InvalidArgument if any row norm deviates from 1 by more than 1e-9.
    void check_unit_norms() const;
};

struct FitReport {
    int iterations_used = 0;
    double energy_initial = 0.0;
    double energy_final = 0.0;
    double mean_misalignment = 0.0;       // radians, final sweep
    std::vector<double> restart_energies; // final energy per restart
    bool converged = false;
};

// Rows drawn independently and uniformly on the unit sphere, deterministic
// in the seed.
DipoleField init_field(std::size_t n_points, int dim, std::uint64_t seed);

// scale * sum over j not in excluded of K(x - x_j) phi_j, accumulated in
// ascending j order (the determinism contract for parallel callers).
// excluded must be sorted ascending; an empty sum yields the zero vector.
std::vector<double> scaled_field_sum(const SampleSet& s, const DipoleField& phi,
                                     std::span<const double> x,
                                     std::span<const std::uint32_t> excluded_sorted,
                                     double scale);

// Indices shut out of point i's kernel sum: i itself plus everything within
// the radius of its n_discr-th neighbour (closed ball). n_discr = 0 excludes
// only i. Ascending order.
std::vector<std::uint32_t> exclusion_set(const SampleSet& s, const NeighborIndex& idx,
                                         std::size_t i, std::size_t n_discr);

// Induced field at sample point i:
//   E_i = 1/(N S_n) * sum_{j : |x_i - x_j| > R_i} K(x_i - x_j) phi_j
// with R_i the distance to the n_discr-th nearest neighbour of x_i.
std::vector<double> compute_field(const SampleSet& s, const DipoleField& phi,
                                  const NeighborIndex& idx, std::size_t n_discr,
                                  std::size_t i);

// Dipole energy U = -(1/N) sum_i phi_i . E_i.
double energy(const SampleSet& s, const DipoleField& phi, const NeighborIndex& idx,
              std::size_t n_discr);

// Rotates phi toward E in their common plane by min(step_cap, angle(phi, E));
// never overshoots, so when the angle is within the cap the result is E/|E|.
// Zero E or (anti)parallel E returns phi unchanged. phi must be unit length.
std::vector<double> rotate_toward(std::span<const double> phi,
                                  std::span<const double> E, double step_cap);

// One synchronized (Jacobi) sweep applied in place: all E_i are evaluated
// against the frozen field, then every phi_i rotates toward its E_i.
// Antiparallel stalls are escaped by a deterministic 0.01 rad kick toward an
// index-seeded axis.
void sweep_field(const SampleSet& s, const NeighborIndex& idx, DipoleField& phi,
                 std::size_t n_discr, double step_cap);

// Fits the dipole field by synchronized sweeps: all E_i are computed against
// a frozen copy of the field, then every phi_i rotates toward its E_i, until
// the mean misalignment angle drops below cfg.tolerance or max_iterations is
// hit. Runs 1 + cfg.restarts seeded starts (seed ^ r) and returns the one
// with the lowest final energy. Non-convergence is reported via the flag,
// not an error. Deterministic in (s, cfg), independent of thread count.
std::pair<DipoleField, FitReport> fit(const SampleSet& s, const NeighborIndex& idx,
                                      const FitConfig& cfg);
std::pair<DipoleField, FitReport> fit(const SampleSet& s, const FitConfig& cfg);

} // namespace greendens

#endif
