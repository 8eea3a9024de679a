#ifndef GREENDENS_ERRORS_HPP
#define GREENDENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace greendens {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid parameter values (k out of range, dim < 2, zero displacement, ...).
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Missing or unreadable files.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Malformed CSV or model documents.
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Dimension mismatch between a model and query points or between two samples.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

} // namespace greendens

#endif
