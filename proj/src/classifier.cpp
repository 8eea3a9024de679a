#include "greendens/classifier.hpp"

#include "greendens/errors.hpp"
#include "greendens/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace greendens {

std::size_t ResponseHistogram::total() const {
    std::size_t t = 0;
    for (std::size_t c : counts) t += c;
    return t;
}

double response_from_densities(double s, double b, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("response: epsilon must be positive");
    return (s + epsilon) / (s + b + 2.0 * epsilon);
}

LikelihoodModel::LikelihoodModel(DensityModel signal, DensityModel background,
                                 double epsilon)
    : signal_(std::move(signal)), background_(std::move(background)), epsilon_(epsilon) {
    if (signal_.dim() != background_.dim())
        throw DimensionError("likelihood model: signal and background dimensions differ");
    if (!(epsilon_ > 0.0))
        throw InvalidArgument("likelihood model: epsilon must be positive");
}

LikelihoodModel LikelihoodModel::train(SampleSet signal_sample, SampleSet background_sample,
                                       const FitConfig& cfg, int n_large_eval,
                                       double epsilon) {
    if (signal_sample.dim() != background_sample.dim())
        throw DimensionError("train: signal and background dimensions differ");
    FitConfig bkg_cfg = cfg;
    bkg_cfg.seed = cfg.seed + 1;
    DensityModel sig = DensityModel::fit(std::move(signal_sample), cfg, n_large_eval);
    DensityModel bkg = DensityModel::fit(std::move(background_sample), bkg_cfg, n_large_eval);
    return LikelihoodModel(std::move(sig), std::move(bkg), epsilon);
}

double LikelihoodModel::response(std::span<const double> x) const {
    return response_from_densities(signal_.estimate(x), background_.estimate(x), epsilon_);
}

std::vector<double> LikelihoodModel::response_batch(const PointMatrix& xs) const {
    if (xs.rows() > 0 && xs.dim != dim())
        throw DimensionError("response_batch: query dimension mismatch");
    std::vector<double> out(xs.rows());
    parallel_for(xs.rows(), [&](std::size_t i) { out[i] = response(xs.row(i)); });
    return out;
}

ResponseHistogram histogram_from_responses(std::span<const double> responses, int n_bins) {
    if (n_bins < 1) throw InvalidArgument("histogram: n_bins must be >= 1");
    ResponseHistogram h;
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (double r : responses) {
        if (!(r >= 0.0 && r <= 1.0))
            throw InvalidArgument("histogram: response outside [0, 1]");
        auto b = static_cast<std::size_t>(r * n_bins);
        if (b >= h.counts.size()) b = h.counts.size() - 1;
        h.counts[b]++;
    }
    return h;
}

ResponseHistogram response_histogram(const LikelihoodModel& m, const PointMatrix& xs,
                                     int n_bins) {
    std::vector<double> r = m.response_batch(xs);
    return histogram_from_responses(r, n_bins);
}

double ks_distance(const ResponseHistogram& a, const ResponseHistogram& b) {
    if (a.bins() != b.bins() || a.bins() == 0)
        throw InvalidArgument("ks_distance: histograms must share a nonempty binning");
    double ta = static_cast<double>(a.total());
    double tb = static_cast<double>(b.total());
    double ca = 0.0, cb = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.bins(); ++i) {
        if (ta > 0.0) ca += static_cast<double>(a.counts[i]) / ta;
        if (tb > 0.0) cb += static_cast<double>(b.counts[i]) / tb;
        worst = std::max(worst, std::abs(ca - cb));
    }
    return worst;
}

} // namespace greendens
