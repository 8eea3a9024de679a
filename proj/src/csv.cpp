#include "greendens/csv.hpp"

#include "greendens/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace greendens {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& path, std::size_t lineno) {
    std::string t = trimmed(field);
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw FormatError("malformed CSV " + path + ": line " + std::to_string(lineno) +
                          ": not a number: '" + field + "'");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PointMatrix read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("malformed CSV " + path + ": missing header");
    std::vector<std::string> header = split_line(line);
    if (header.empty())
        throw FormatError("malformed CSV " + path + ": empty header");
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (trimmed(header[k]) != "x" + std::to_string(k))
            throw FormatError("malformed CSV " + path + ": header column " +
                              std::to_string(k) + " must be x" + std::to_string(k));
    }
    int dim = static_cast<int>(header.size());
    if (dim < 2)
        throw FormatError("malformed CSV " + path + ": need at least 2 coordinate columns");

    PointMatrix m;
    m.dim = dim;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != static_cast<std::size_t>(dim))
            throw FormatError("malformed CSV " + path + ": line " + std::to_string(lineno) +
                              ": expected " + std::to_string(dim) + " fields, got " +
                              std::to_string(fields.size()));
        for (const std::string& f : fields) m.data.push_back(parse_double(f, path, lineno));
    }
    return m;
}

void write_points_csv(const std::string& path, const PointMatrix& pts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    for (int k = 0; k < pts.dim; ++k) out << (k ? "," : "") << "x" << k;
    out << "\n";
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        std::span<const double> row = pts.row(i);
        for (int k = 0; k < pts.dim; ++k)
            out << (k ? "," : "") << format_double(row[static_cast<std::size_t>(k)]);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_values_csv(const std::string& path, const PointMatrix& pts,
                      std::span<const double> values, const std::string& value_column) {
    if (values.size() != pts.rows())
        throw InvalidArgument("write_values_csv: one value per point required");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    for (int k = 0; k < pts.dim; ++k) out << (k ? "," : "") << "x" << k;
    out << "," << value_column << "\n";
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        std::span<const double> row = pts.row(i);
        for (int k = 0; k < pts.dim; ++k)
            out << (k ? "," : "") << format_double(row[static_cast<std::size_t>(k)]);
        out << "," << format_double(values[i]) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_profile_csv(const std::string& path, const RadialProfile& p) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "r_lo,r_hi,count,mean,spread,truth\n";
    for (std::size_t b = 0; b < p.bins(); ++b) {
        out << format_double(p.bin_edges[b]) << "," << format_double(p.bin_edges[b + 1])
            << "," << p.counts[b] << "," << format_double(p.mean[b]) << ","
            << format_double(p.spread[b]) << "," << format_double(p.truth[b]) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_histogram_csv(const std::string& path, const ResponseHistogram& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << "bin_lo,bin_hi,count\n";
    double width = 1.0 / static_cast<double>(h.bins());
    for (std::size_t b = 0; b < h.bins(); ++b) {
        double lo = width * static_cast<double>(b);
        double hi = b + 1 == h.bins() ? 1.0 : width * static_cast<double>(b + 1);
        out << format_double(lo) << "," << format_double(hi) << "," << h.counts[b] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace greendens
