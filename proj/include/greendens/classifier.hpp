#ifndef GREENDENS_CLASSIFIER_HPP
#define GREENDENS_CLASSIFIER_HPP

#include "greendens/density.hpp"

#include <span>
#include <vector>

namespace greendens {

// Counts of response values over uniform bins spanning [0, 1].
struct ResponseHistogram {
    std::vector<std::size_t> counts;

    std::size_t bins() const { return counts.size(); }
    std::size_t total() const;
};

// Regularized likelihood ratio (s + eps) / (s + b + 2 eps); strictly inside
// (0, 1), equal to 0.5 when both densities vanish, and exactly complementary
// under a signal/background swap.
double response_from_densities(double s, double b, double epsilon);

// Binary likelihood-ratio classifier built from two independently fitted
// density models. Immutable after training; concurrent scoring is safe.
class LikelihoodModel {
public:
    LikelihoodModel(DensityModel signal, DensityModel background, double epsilon = 1e-12);

    // Fits both densities with the same configuration; the background fit
    // uses cfg.seed + 1 so the two starts are distinct but deterministic.
    static LikelihoodModel train(SampleSet signal_sample, SampleSet background_sample,
                                 const FitConfig& cfg, int n_large_eval = 0,
                                 double epsilon = 1e-12);

    const DensityModel& signal() const { return signal_; }
    const DensityModel& background() const { return background_; }
    double epsilon() const { return epsilon_; }
    int dim() const { return signal_.dim(); }

    double response(std::span<const double> x) const;
    std::vector<double> response_batch(const PointMatrix& xs) const;

private:
    DensityModel signal_;
    DensityModel background_;
    double epsilon_;
};

ResponseHistogram histogram_from_responses(std::span<const double> responses, int n_bins);

ResponseHistogram response_histogram(const LikelihoodModel& m, const PointMatrix& xs,
                                     int n_bins);

// Max absolute difference between the normalized cumulative distributions.
// Throws InvalidArgument when the binnings differ.
double ks_distance(const ResponseHistogram& a, const ResponseHistogram& b);

} // namespace greendens

#endif
