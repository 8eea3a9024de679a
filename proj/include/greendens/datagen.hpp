#ifndef GREENDENS_DATAGEN_HPP
#define GREENDENS_DATAGEN_HPP

#include "greendens/sample.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace greendens {

// N independent draws from an isotropic centered Gaussian; pure function of
// (dim, n, sigma, seed).
SampleSet sample_gaussian(int dim, std::size_t n, double sigma, std::uint64_t seed);

// Centers of the twelve-Gaussian signal benchmark: a 4x3 grid inside the
// unit square, c_ij = ((2i+1)/8, (2j+1)/6). Pairwise separation >= 0.25,
// non-overlapping at 6 sigma for sigma = 0.02.
std::array<std::array<double, 2>, 12> twelve_centers();

inline constexpr double kTwelveSigma = 0.02;

// Two-dimensional classification benchmark: signal is an equal-weight
// mixture of twelve isotropic Gaussians (sigma 0.02) on the grid above,
// background is uniform on the unit square. One generator stream seeded by
// `seed` draws the signal first, then the background.
std::pair<SampleSet, SampleSet> sample_twelve_plus_flat(std::size_t n_signal,
                                                        std::size_t n_background,
                                                        std::uint64_t seed);

} // namespace greendens

#endif
