#ifndef GREENDENS_SAMPLE_HPP
#define GREENDENS_SAMPLE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace greendens {

// Plain row-major point block, dim columns. Carries no validity guarantees;
// used for query points, which may repeat.
struct PointMatrix {
    int dim = 0;
    std::vector<double> data; // size() == rows() * dim

    PointMatrix() = default;
    PointMatrix(int dim_, std::vector<double> data_);

    std::size_t rows() const { return dim == 0 ? 0 : data.size() / static_cast<std::size_t>(dim); }
    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

// Validated sample: all coordinates finite, at least two points, and no two
// rows identical. The kernel diverges at zero separation, so exact
// duplicates are rejected at construction with a diagnostic naming the
// offending rows.
class SampleSet {
public:
    SampleSet(int dim, std::vector<double> points_rowmajor);
    explicit SampleSet(PointMatrix m) : SampleSet(m.dim, std::move(m.data)) {}

    int dim() const { return dim_; }
    std::size_t size() const { return n_points_; }

    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    const std::vector<double>& data() const { return points_; }

private:
    int dim_;
    std::size_t n_points_;
    std::vector<double> points_;
};

} // namespace greendens

#endif
