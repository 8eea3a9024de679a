#ifndef GREENDENS_VALIDATION_HPP
#define GREENDENS_VALIDATION_HPP

#include "greendens/density.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace greendens {

// Independent numerical checks of the kernel math. None of these reuse the
// closed-form kernel internals; they integrate and differentiate the radial
// potential directly, so a sign or constant error in kernel_core shows up
// here.

// Relative magnitude of the surface integral of K(r) phi over the sphere of
// radius R: |sum of K phi| / sum of |K phi| over the quadrature points, a
// cancellation measure in [0, 1]. Exact (uniform-angle) quadrature for
// dim = 2; seeded Monte Carlo on the sphere for dim >= 3. The analytic
// value of the integral is zero.
double shell_null_integral(int dim, double radius, std::size_t quad_points,
                           std::span<const double> phi, std::uint64_t seed = 7);

// Worst relative deviation (max-norm) between dipole_kernel and central
// finite differences of the radial potential at `samples` random
// displacements with |r| in [0.5, 2]. Step 1e-4.
double kernel_fd_check(int dim, std::size_t samples, std::uint64_t seed);

// Tensor-product trapezoid grid.
struct GridSpec {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<int> points_per_axis; // >= 2 each

    std::size_t total_points() const;
};

// Grid covering the sample's bounding box padded by 3 per-axis sample
// standard deviations.
GridSpec default_normalization_grid(const SampleSet& s, int points_per_axis);

// Trapezoid integral of the model's density estimate over the grid; close
// to 1 for a healthy model.
double normalization_check(const DensityModel& m, const GridSpec& grid);

// Full oracle battery as used by the `validate` CLI command: kernel finite
// differences plus algebraic invariants for dims (default {2, 3, 5}), and
// shell null integrals (quadrature for n = 2, Monte Carlo for n = 3, both
// with 1e5 points). Writes one line per check with the measured value;
// returns false if any check fails its threshold.
bool run_validation(std::optional<int> dim, std::uint64_t seed, std::ostream& out);

} // namespace greendens

#endif
