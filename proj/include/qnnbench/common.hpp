#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qnnbench {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a numerical quantity (gradient, metric, loss) is not finite.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Derives an independent 64-bit stream seed from a base seed and up to two
/// stream coordinates (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t sub = 0);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace qnnbench
