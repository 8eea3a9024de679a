#include "greendens/sample.hpp"

#include "greendens/errors.hpp"
#include "greendens/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace greendens {

PointMatrix::PointMatrix(int dim_, std::vector<double> data_)
    : dim(dim_), data(std::move(data_)) {
    require_dim(dim);
    if (data.size() % static_cast<std::size_t>(dim) != 0)
        throw InvalidArgument("point matrix: data size is not a multiple of the dimension");
}

SampleSet::SampleSet(int dim, std::vector<double> points_rowmajor)
    : dim_(dim), points_(std::move(points_rowmajor)) {
    require_dim(dim_);
    if (points_.size() % static_cast<std::size_t>(dim_) != 0)
        throw InvalidArgument("sample: data size is not a multiple of the dimension");
    n_points_ = points_.size() / static_cast<std::size_t>(dim_);
    if (n_points_ < 2)
        throw InvalidArgument("sample: need at least 2 points, got " + std::to_string(n_points_));
    for (double v : points_)
        if (!std::isfinite(v))
            throw InvalidArgument("sample: non-finite coordinate");

    // Duplicate check via lexicographic sort of row indices.
    std::vector<std::size_t> order(n_points_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t d = static_cast<std::size_t>(dim_);
    auto row_less = [&](std::size_t a, std::size_t b) {
        const double* pa = points_.data() + a * d;
        const double* pb = points_.data() + b * d;
        return std::lexicographical_compare(pa, pa + d, pb, pb + d);
    };
    std::sort(order.begin(), order.end(), row_less);
    std::string dups;
    int dup_count = 0;
    for (std::size_t i = 1; i < n_points_; ++i) {
        std::size_t a = order[i - 1], b = order[i];
        if (std::equal(points_.data() + a * d, points_.data() + a * d + d,
                       points_.data() + b * d)) {
            if (dup_count < 8)
                dups += " (" + std::to_string(std::min(a, b)) + "," +
                        std::to_string(std::max(a, b)) + ")";
            ++dup_count;
        }
    }
    if (dup_count > 0)
        throw InvalidArgument("sample: " + std::to_string(dup_count) +
                              " duplicate row pair(s):" + dups +
                              (dup_count > 8 ? " ..." : ""));
}

} // namespace greendens
