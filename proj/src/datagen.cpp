#include "greendens/datagen.hpp"

#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"
#include "greendens/rng.hpp"

namespace greendens {

SampleSet sample_gaussian(int dim, std::size_t n, double sigma, std::uint64_t seed) {
    require_dim(dim);
    if (n < 2) throw InvalidArgument("sample_gaussian: need at least 2 points");
    if (!(sigma > 0.0)) throw InvalidArgument("sample_gaussian: sigma must be positive");
    Rng rng(derive_seed(seed, kSeedDomainGaussianSample));
    std::vector<double> pts(n * static_cast<std::size_t>(dim));
    for (double& x : pts) x = sigma * rng.gaussian();
    return SampleSet(dim, std::move(pts));
}

std::array<std::array<double, 2>, 12> twelve_centers() {
    std::array<std::array<double, 2>, 12> c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
            c[static_cast<std::size_t>(i * 3 + j)] = {
                (2.0 * i + 1.0) / 8.0, (2.0 * j + 1.0) / 6.0};
    return c;
}

std::pair<SampleSet, SampleSet> sample_twelve_plus_flat(std::size_t n_signal,
                                                        std::size_t n_background,
                                                        std::uint64_t seed) {
    if (n_signal < 2 || n_background < 2)
        throw InvalidArgument("sample_twelve_plus_flat: need at least 2 points per class");
    Rng rng(derive_seed(seed, kSeedDomainTwelveSample));
    const auto centers = twelve_centers();

    std::vector<double> sig(n_signal * 2);
    for (std::size_t i = 0; i < n_signal; ++i) {
        std::size_t c = static_cast<std::size_t>(rng.next_u64() % 12ULL);
        sig[2 * i] = centers[c][0] + kTwelveSigma * rng.gaussian();
        sig[2 * i + 1] = centers[c][1] + kTwelveSigma * rng.gaussian();
    }
    std::vector<double> bkg(n_background * 2);
    for (double& x : bkg) x = rng.uniform01();

    return {SampleSet(2, std::move(sig)), SampleSet(2, std::move(bkg))};
}

} // namespace greendens
