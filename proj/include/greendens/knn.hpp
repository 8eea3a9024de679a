#ifndef GREENDENS_KNN_HPP
#define GREENDENS_KNN_HPP

#include "greendens/neighbors.hpp"
#include "greendens/sample.hpp"

#include <span>
#include <vector>

namespace greendens {

// Volume of the radius-R ball in `dim` dimensions.
double ball_volume(int dim, double R);

// Flat-kernel k-nearest-neighbour density estimate g = k / (N V_n(R_k)),
// with R_k the distance to the k-th nearest sample point (a sample point
// coincident with x is excluded). With k = dim * n_large_eval the radius
// R_k equals the exclusion radius of the matching DensityModel.
double knn_density(const SampleSet& s, const NeighborIndex& idx,
                   std::span<const double> x, std::size_t k);

// Order-preserving parallel map over query rows.
std::vector<double> knn_density_batch(const SampleSet& s, const NeighborIndex& idx,
                                      const PointMatrix& xs, std::size_t k);

} // namespace greendens

#endif
