#include "greendens/neighbors.hpp"

#include "greendens/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace greendens {

namespace {

constexpr std::size_t kLeafSize = 16;

inline double dist2(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

} // namespace

NeighborIndex::NeighborIndex(const SampleSet& s)
    : dim_(s.dim()), n_(s.size()) {
    perm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = static_cast<std::uint32_t>(i);
    root_ = build(0, n_, s.data());
    // Coordinates in tree order, so leaf scans stay contiguous.
    pts_.resize(n_ * static_cast<std::size_t>(dim_));
    const std::size_t d = static_cast<std::size_t>(dim_);
    for (std::size_t pos = 0; pos < n_; ++pos) {
        const double* src = s.data().data() + perm_[pos] * d;
        std::copy(src, src + d, pts_.data() + pos * d);
    }
}

std::int32_t NeighborIndex::build(std::size_t lo, std::size_t hi,
                                  const std::vector<double>& pts) {
    const std::size_t d = static_cast<std::size_t>(dim_);
    std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    boxes_.resize(boxes_.size() + 2 * d);
    double* blo = boxes_.data() + static_cast<std::size_t>(id) * 2 * d;
    double* bhi = blo + d;
    for (std::size_t k = 0; k < d; ++k) {
        blo[k] = pts[perm_[lo] * d + k];
        bhi[k] = blo[k];
    }
    for (std::size_t i = lo + 1; i < hi; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            double v = pts[perm_[i] * d + k];
            if (v < blo[k]) blo[k] = v;
            if (v > bhi[k]) bhi[k] = v;
        }

    if (hi - lo <= kLeafSize) {
        std::sort(perm_.begin() + static_cast<std::ptrdiff_t>(lo),
                  perm_.begin() + static_cast<std::ptrdiff_t>(hi));
        nodes_[static_cast<std::size_t>(id)].begin = static_cast<std::uint32_t>(lo);
        nodes_[static_cast<std::size_t>(id)].count = static_cast<std::uint32_t>(hi - lo);
        return id;
    }

    std::size_t split = 0;
    double extent = -1.0;
    for (std::size_t k = 0; k < d; ++k)
        if (bhi[k] - blo[k] > extent) {
            extent = bhi[k] - blo[k];
            split = k;
        }
    std::size_t mid = (lo + hi) / 2;
    auto cmp = [&pts, d, split](std::uint32_t a, std::uint32_t b) {
        double va = pts[a * d + split], vb = pts[b * d + split];
        if (va != vb) return va < vb;
        return a < b;
    };
    std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(lo),
                     perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                     perm_.begin() + static_cast<std::ptrdiff_t>(hi), cmp);
    std::int32_t left = build(lo, mid, pts);
    std::int32_t right = build(mid, hi, pts);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

double NeighborIndex::box_min_dist2(std::int32_t node, std::span<const double> x) const {
    const std::size_t d = static_cast<std::size_t>(dim_);
    const double* blo = boxes_.data() + static_cast<std::size_t>(node) * 2 * d;
    const double* bhi = blo + d;
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double dd = 0.0;
        if (x[k] < blo[k]) dd = blo[k] - x[k];
        else if (x[k] > bhi[k]) dd = x[k] - bhi[k];
        s += dd * dd;
    }
    return s;
}

double NeighborIndex::kth_distance(std::span<const double> x, std::size_t k,
                                   bool exclude_self) const {
    if (x.size() != static_cast<std::size_t>(dim_))
        throw DimensionError("kth_distance: query dimension mismatch");
    if (k < 1 || k > n_)
        throw InvalidArgument("kth_distance: k=" + std::to_string(k) +
                              " out of range for " + std::to_string(n_) + " points");
    using Entry = std::pair<double, std::uint32_t>; // (squared distance, index)
    std::priority_queue<Entry> heap;

    const std::size_t d = static_cast<std::size_t>(dim_);
    auto visit = [&](std::int32_t id, auto&& self) -> void {
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        if (nd.count > 0) {
            for (std::uint32_t pos = nd.begin; pos < nd.begin + nd.count; ++pos) {
                double d2 = dist2(x.data(), pts_.data() + pos * d, dim_);
                if (exclude_self && d2 == 0.0) continue;
                Entry e{d2, perm_[pos]};
                if (heap.size() < k) heap.push(e);
                else if (e < heap.top()) {
                    heap.pop();
                    heap.push(e);
                }
            }
            return;
        }
        double dl = box_min_dist2(nd.left, x);
        double dr = box_min_dist2(nd.right, x);
        std::int32_t first = nd.left, second = nd.right;
        double dfirst = dl, dsecond = dr;
        if (dr < dl) {
            std::swap(first, second);
            std::swap(dfirst, dsecond);
        }
        // A subtree is skippable only when every point in it is strictly
        // worse than the current k-th candidate; equal distance can still
        // win on the index tie-break.
        if (heap.size() < k || dfirst <= heap.top().first) self(first, self);
        if (heap.size() < k || dsecond <= heap.top().first) self(second, self);
    };
    visit(root_, visit);

    if (heap.size() < k)
        throw InvalidArgument("kth_distance: k=" + std::to_string(k) +
                              " exceeds available points after self-exclusion");
    return std::sqrt(heap.top().first);
}

std::vector<std::uint32_t> NeighborIndex::within_closed_ball(
    std::span<const double> x, double R) const {
    if (x.size() != static_cast<std::size_t>(dim_))
        throw DimensionError("within_closed_ball: query dimension mismatch");
    if (R < 0.0)
        throw InvalidArgument("within_closed_ball: negative radius");
    std::vector<std::uint32_t> out;
    const std::size_t d = static_cast<std::size_t>(dim_);
    auto visit = [&](std::int32_t id, auto&& self) -> void {
        if (std::sqrt(box_min_dist2(id, x)) > R) return;
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        if (nd.count > 0) {
            for (std::uint32_t pos = nd.begin; pos < nd.begin + nd.count; ++pos) {
                if (std::sqrt(dist2(x.data(), pts_.data() + pos * d, dim_)) <= R)
                    out.push_back(perm_[pos]);
            }
            return;
        }
        self(nd.left, self);
        self(nd.right, self);
    };
    visit(root_, visit);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> NeighborIndex::beyond_radius(std::span<const double> x,
                                                        double R) const {
    std::vector<std::uint32_t> inside = within_closed_ball(x, R);
    std::vector<std::uint32_t> out;
    out.reserve(n_ - inside.size());
    std::size_t ip = 0;
    for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(n_); ++j) {
        if (ip < inside.size() && inside[ip] == j) {
            ++ip;
            continue;
        }
        out.push_back(j);
    }
    return out;
}

} // namespace greendens
