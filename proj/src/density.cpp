#include "greendens/density.hpp"

#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"
#include "greendens/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace greendens {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

DensityModel::DensityModel(SampleSet sample, DipoleField field, FitConfig fit_config,
                           int n_large_eval, FitReport report)
    : sample_(std::move(sample)),
      field_(std::move(field)),
      fit_config_(fit_config),
      n_large_eval_(n_large_eval > 0 ? n_large_eval : fit_config.n_large_fit),
      report_(std::move(report)),
      index_(sample_),
      scale_(1.0 / (static_cast<double>(sample_.size()) * unit_sphere_surface(sample_.dim()))),
      magnitude_correction_(static_cast<double>(sample_.dim()) /
                            (static_cast<double>(sample_.dim()) -
                             kernel_prefactor(sample_.dim()))) {
    if (field_.dim != sample_.dim())
        throw DimensionError("density model: field dimension does not match sample");
    if (field_.rows() != sample_.size())
        throw InvalidArgument("density model: field row count does not match sample size");
    field_.check_unit_norms();
    if (n_large_eval_ < 1)
        throw InvalidArgument("density model: n_large_eval must be positive");
    if (n_discr_eval() + 2 > sample_.size())
        throw InvalidArgument("density model: dim * n_large_eval = " +
                              std::to_string(n_discr_eval()) +
                              " exceeds N - 2 for N = " + std::to_string(sample_.size()));
}

DensityModel DensityModel::fit(SampleSet sample, const FitConfig& cfg, int n_large_eval) {
    auto [field, report] = greendens::fit(sample, cfg);
    return DensityModel(std::move(sample), std::move(field), cfg, n_large_eval,
                        std::move(report));
}

double DensityModel::estimate(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(dim()))
        throw DimensionError("estimate: query dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidArgument("estimate: non-finite query point");
    double R = index_.kth_distance(x, n_discr_eval(), /*exclude_self=*/true);
    std::vector<std::uint32_t> inside = index_.within_closed_ball(x, R);
    std::vector<double> g = scaled_field_sum(sample_, field_, x, inside, scale_);
    double n2 = 0.0;
    for (double v : g) n2 += v * v;
    return magnitude_correction_ * std::sqrt(n2);
}

std::vector<double> DensityModel::estimate_batch(const PointMatrix& xs) const {
    if (xs.rows() > 0 && xs.dim != dim())
        throw DimensionError("estimate_batch: query dimension mismatch");
    std::vector<double> out(xs.rows());
    parallel_for(xs.rows(), [&](std::size_t i) { out[i] = estimate(xs.row(i)); });
    return out;
}

RadialProfile profile_from_values(const PointMatrix& points,
                                  std::span<const double> values,
                                  std::span<const double> center, int n_bins,
                                  double r_max, const RadialDensity& truth) {
    if (n_bins < 1) throw InvalidArgument("profile: n_bins must be >= 1");
    if (!(r_max > 0.0)) throw InvalidArgument("profile: r_max must be positive");
    if (center.size() != static_cast<std::size_t>(points.dim))
        throw DimensionError("profile: center dimension mismatch");
    if (values.size() != points.rows())
        throw InvalidArgument("profile: one value per point required");

    const std::size_t nb = static_cast<std::size_t>(n_bins);
    RadialProfile p;
    p.bin_edges.resize(nb + 1);
    double width = r_max / static_cast<double>(n_bins);
    for (std::size_t b = 0; b <= nb; ++b)
        p.bin_edges[b] = width * static_cast<double>(b);
    p.bin_edges[nb] = r_max;
    p.counts.assign(nb, 0);
    p.mean.assign(nb, kNaN);
    p.spread.assign(nb, kNaN);
    p.truth.assign(nb, kNaN);

    // Two passes for a numerically stable spread; binning runs in index
    // order so accumulation is deterministic.
    std::vector<std::size_t> bin_of(points.rows());
    std::vector<double> sum(nb, 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        std::span<const double> pt = points.row(i);
        double r2 = 0.0;
        for (std::size_t k = 0; k < pt.size(); ++k) {
            double d = pt[k] - center[k];
            r2 += d * d;
        }
        double r = std::sqrt(r2);
        if (r > r_max) {
            bin_of[i] = nb; // sentinel: not profiled
            continue;
        }
        std::size_t b = static_cast<std::size_t>(r / width);
        if (b >= nb) b = nb - 1;
        bin_of[i] = b;
        p.counts[b]++;
        sum[b] += values[i];
    }
    for (std::size_t b = 0; b < nb; ++b)
        if (p.counts[b] > 0) p.mean[b] = sum[b] / static_cast<double>(p.counts[b]);
    std::vector<double> sq(nb, 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        std::size_t b = bin_of[i];
        if (b == nb) continue;
        double d = values[i] - p.mean[b];
        sq[b] += d * d;
    }
    for (std::size_t b = 0; b < nb; ++b) {
        if (p.counts[b] > 0)
            p.spread[b] = std::sqrt(sq[b] / static_cast<double>(p.counts[b]));
        if (truth)
            p.truth[b] = truth(0.5 * (p.bin_edges[b] + p.bin_edges[b + 1]));
    }
    return p;
}

RadialProfile radial_profile(const DensityModel& m, std::span<const double> center,
                             int n_bins, double r_max, const RadialDensity& truth) {
    PointMatrix pts(m.dim(), m.sample().data());
    std::vector<double> est = m.estimate_batch(pts);
    return profile_from_values(pts, est, center, n_bins, r_max, truth);
}

RadialDensity gaussian_radial_density(int dim, double sigma) {
    require_dim(dim);
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian density: sigma must be positive");
    double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma,
                           -0.5 * static_cast<double>(dim));
    double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    return [norm, inv2s2](double r) { return norm * std::exp(-r * r * inv2s2); };
}

} // namespace greendens
