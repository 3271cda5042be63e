// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace longmem {

/// A parameter fell outside its admissible open interval (H, d, theta, ...).
/// std::domain_error is reused directly so callers can catch either type.
using parameter_error = std::domain_error;

/// A custom covariance sequence was asked for lags beyond its stored length.
class insufficient_data_error : public std::runtime_error {
public:
    explicit insufficient_data_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// The circulant embedding of a covariance sequence had a significantly
/// negative eigenvalue, so the sequence cannot be sampled exactly.
class embedding_error : public std::runtime_error {
public:
    embedding_error(const std::string& what, double min_eig_ratio)
        : std::runtime_error(what), min_eig_ratio_(min_eig_ratio) {}

    /// Most negative eigenvalue divided by the largest one.
    double min_eig_ratio() const noexcept { return min_eig_ratio_; }

private:
    double min_eig_ratio_;
};

} // namespace longmem
