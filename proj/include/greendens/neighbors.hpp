#ifndef GREENDENS_NEIGHBORS_HPP
#define GREENDENS_NEIGHBORS_HPP

#include "greendens/sample.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace greendens {

// Exact nearest-neighbour queries over a SampleSet, backed by a kd-tree.
// The index copies the coordinates it needs, so it stays valid independently
// of the originating SampleSet. Construction is deterministic; queries are
// exact (always equal to a brute-force linear scan) and immutable after
// construction, so concurrent reads are safe.
class NeighborIndex {
public:
    explicit NeighborIndex(const SampleSet& s);

    int dim() const { return dim_; }
    std::size_t size() const { return n_; }

    // Euclidean distance to the k-th nearest sample point (k is 1-based);
    // distance ties are broken toward the smaller point index. With
    // exclude_self, points at exactly zero distance from x are skipped.
    // Throws InvalidArgument when fewer than k points are available.
    double kth_distance(std::span<const double> x, std::size_t k,
                        bool exclude_self) const;

    // Original indices j with |x - x_j| > R, strictly; ascending order.
    std::vector<std::uint32_t> beyond_radius(std::span<const double> x,
                                             double R) const;

    // Complement of beyond_radius: indices with |x - x_j| <= R, ascending.
    std::vector<std::uint32_t> within_closed_ball(std::span<const double> x,
                                                  double R) const;

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t count = 0;  // > 0 marks a leaf
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::int32_t build(std::size_t lo, std::size_t hi,
                       const std::vector<double>& pts);
    double box_min_dist2(std::int32_t node, std::span<const double> x) const;

    int dim_ = 0;
    std::size_t n_ = 0;
    std::vector<Node> nodes_;
    std::vector<double> boxes_;        // per node: dim lows then dim highs
    std::vector<std::uint32_t> perm_;  // tree position -> original index
    std::vector<double> pts_;          // coordinates in tree order
    std::int32_t root_ = -1;
};

} // namespace greendens

#endif
