#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankcorr {

// Statistical error conditions. They are deliberately distinct from
// std::invalid_argument so that callers can map data problems (degenerate
// margins etc.) to a different exit path than programming errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class degenerate_margin : public error {
public:
    using error::error;
};

class degenerate_sample : public error {
public:
    using error::error;
};

class degenerate_denominator : public error {
public:
    using error::error;
};

class sample_too_large : public error {
public:
    using error::error;
};

class lag_too_large : public error {
public:
    using error::error;
};

class boundary_value : public error {
public:
    using error::error;
};

class invalid_level : public error {
public:
    using error::error;
};

class zero_variance : public error {
public:
    using error::error;
};

class invalid_spec : public error {
public:
    using error::error;
};

class target_unattainable : public error {
public:
    using error::error;
};

using Series = std::vector<double>;

inline void validate_series(std::span<const double> v, std::size_t min_n,
                            const char* name) {
    if (v.size() < min_n)
        throw invalid_spec(std::string(name) + ": need at least " +
                           std::to_string(min_n) + " observations, got " +
                           std::to_string(v.size()));
    for (double x : v)
        if (!std::isfinite(x))
            throw invalid_spec(std::string(name) + ": non-finite entry");
}

// Two aligned series of equal length. Indices are aligned in time; for time
// series input the row order is the time order.
struct PairedSample {
    Series x;
    Series y;

    PairedSample(Series x_in, Series y_in) : x(std::move(x_in)), y(std::move(y_in)) {
        if (x.size() != y.size())
            throw invalid_spec("paired sample: series lengths differ (" +
                               std::to_string(x.size()) + " vs " +
                               std::to_string(y.size()) + ")");
        validate_series(x, 1, "x");
        validate_series(y, 1, "y");
    }

    std::size_t size() const { return x.size(); }
};

inline int sgn(double d) { return (d > 0.0) - (d < 0.0); }

}  // namespace rankcorr
