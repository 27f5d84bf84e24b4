#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mbp {

using Complex = std::complex<double>;

/// Input outside the admissible set (a point not in the disk, a bad
/// multiplicity, a grid with r_max >= 1, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: root finder, Newton corrector, homotopy,
/// sparse factorization.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tolerance for classifying a point as lying on the unit circle.
inline constexpr double kCircleTol = 1e-12;

}  // namespace mbp

namespace mbp {

/// A zero or critical point has a different multiplicity than required.
class OrderMismatchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace mbp
