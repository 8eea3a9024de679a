#ifndef GREENDENS_DENSITY_HPP
#define GREENDENS_DENSITY_HPP

#include "greendens/neighbors.hpp"
#include "greendens/sample.hpp"
#include "greendens/solver.hpp"

#include <functional>
#include <span>
#include <vector>

namespace greendens {

// Analytic density as a function of radius, for profile truth columns.
using RadialDensity = std::function<double(double)>;

// Binned mean/spread of density estimates versus distance from a center.
// Bins are uniform on [0, r_max]; points beyond r_max are not profiled.
// Empty bins carry count 0 and NaN mean/spread. The truth column holds the
// analytic density at the bin midpoint, NaN when no truth was supplied.
struct RadialProfile {
    std::vector<double> bin_edges;      // n_bins + 1 edges
    std::vector<std::size_t> counts;
    std::vector<double> mean;
    std::vector<double> spread;         // population standard deviation
    std::vector<double> truth;

    std::size_t bins() const { return counts.size(); }
};

// A fitted sample plus its dipole field; the serializable artifact that
// answers density queries. Immutable after construction, so concurrent
// estimates are safe.
class DensityModel {
public:
    // n_large_eval <= 0 selects fit_config.n_large_fit.
    DensityModel(SampleSet sample, DipoleField field, FitConfig fit_config,
                 int n_large_eval, FitReport report);

    // Runs the dipole fit on the sample and wraps the result.
    static DensityModel fit(SampleSet sample, const FitConfig& cfg,
                            int n_large_eval = 0);

    const SampleSet& sample() const { return sample_; }
    const DipoleField& field() const { return field_; }
    const FitConfig& fit_config() const { return fit_config_; }
    const FitReport& report() const { return report_; }
    const NeighborIndex& index() const { return index_; }
    int n_large_eval() const { return n_large_eval_; }
    int dim() const { return sample_.dim(); }
    std::size_t n_discr_eval() const {
        return static_cast<std::size_t>(dim()) * static_cast<std::size_t>(n_large_eval_);
    }

    // Density estimate at x: the norm of the kernel sum over sample points
    // beyond the exclusion radius (the distance to the n*n_large_eval-th
    // nearest sample point; a sample point coincident with x is always
    // excluded), rescaled by n/(n - c_n). The rescaling is required because
    // the sphere-excluded sum is a principal-value estimate: the
    // distributional mixed derivative of the radial potential also carries a
    // delta term (c_n S_n / n) delta_uv delta(x - x') that point sampling
    // never sees, so the raw sum converges to (1 - c_n/n) times the density.
    // Nonnegative; an empty sum gives 0.
    double estimate(std::span<const double> x) const;

    // Elementwise estimate; order-preserving parallel map, identical to a
    // sequential loop.
    std::vector<double> estimate_batch(const PointMatrix& xs) const;

private:
    SampleSet sample_;
    DipoleField field_;
    FitConfig fit_config_;
    int n_large_eval_;
    FitReport report_;
    NeighborIndex index_;
    double scale_;                // 1 / (N S_n)
    double magnitude_correction_; // n / (n - c_n), the principal-value factor
};

// Bins precomputed per-point values by distance from center. values[i]
// belongs to points.row(i).
RadialProfile profile_from_values(const PointMatrix& points,
                                  std::span<const double> values,
                                  std::span<const double> center, int n_bins,
                                  double r_max, const RadialDensity& truth = {});

// Profiles the model's own sample points.
RadialProfile radial_profile(const DensityModel& m, std::span<const double> center,
                             int n_bins, double r_max,
                             const RadialDensity& truth = {});

// Isotropic centered Gaussian density in `dim` dimensions as a function of
// radius: (2 pi sigma^2)^(-dim/2) exp(-r^2 / (2 sigma^2)).
RadialDensity gaussian_radial_density(int dim, double sigma);

} // namespace greendens

#endif
