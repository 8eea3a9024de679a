#ifndef GREENDENS_CSV_HPP
#define GREENDENS_CSV_HPP

#include "greendens/classifier.hpp"
#include "greendens/density.hpp"
#include "greendens/sample.hpp"

#include <span>
#include <string>

namespace greendens {

// Point CSV: header "x0,x1,...,x{n-1}", one point per row, full-precision
// decimal reals (round-trips every double bit-exactly). The dimension is
// inferred from the header.
PointMatrix read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const PointMatrix& pts);

// Point rows plus one derived column (density, response, ...).
void write_values_csv(const std::string& path, const PointMatrix& pts,
                      std::span<const double> values, const std::string& value_column);

// Header: r_lo,r_hi,count,mean,spread,truth. Absent entries print as nan.
void write_profile_csv(const std::string& path, const RadialProfile& p);

// Header: bin_lo,bin_hi,count over [0, 1].
void write_histogram_csv(const std::string& path, const ResponseHistogram& h);

// Full-precision decimal rendering used for every real in CSV output.
std::string format_double(double v);

} // namespace greendens

#endif
