#include "greendens/knn.hpp"

#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"
#include "greendens/parallel.hpp"

#include <cmath>
#include <numbers>

namespace greendens {

double ball_volume(int dim, double R) {
    require_dim(dim);
    if (R < 0.0) throw InvalidArgument("ball_volume: negative radius");
    double half = 0.5 * static_cast<double>(dim);
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0) *
           std::pow(R, static_cast<double>(dim));
}

double knn_density(const SampleSet& s, const NeighborIndex& idx,
                   std::span<const double> x, std::size_t k) {
    if (k < 1) throw InvalidArgument("knn_density: k must be >= 1");
    double Rk = idx.kth_distance(x, k, /*exclude_self=*/true);
    return static_cast<double>(k) /
           (static_cast<double>(s.size()) * ball_volume(s.dim(), Rk));
}

std::vector<double> knn_density_batch(const SampleSet& s, const NeighborIndex& idx,
                                      const PointMatrix& xs, std::size_t k) {
    if (xs.rows() > 0 && xs.dim != s.dim())
        throw DimensionError("knn_density_batch: query dimension mismatch");
    std::vector<double> out(xs.rows());
    parallel_for(xs.rows(), [&](std::size_t i) {
        out[i] = knn_density(s, idx, xs.row(i), k);
    });
    return out;
}

} // namespace greendens
