#include "qnnbench/sim/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qnnbench::sim {

void validate(const NoiseSpec& noise)
{
    const double p = noise.per_layer_depolarizing_p;
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("depolarizing probability " + std::to_string(p) + " outside [0, 1]");
    }
    if (noise.layer_count < 0) {
        throw std::invalid_argument("noise layer count must be non-negative");
    }
}

double signal_retention(const NoiseSpec& noise)
{
    validate(noise);
    if (noise.is_noiseless()) {
        return 1.0;
    }
    return std::pow(1.0 - noise.per_layer_depolarizing_p, noise.layer_count);
}

double apply_depolarizing(double clean_expectation, double observable_trace, int n_qubits, const NoiseSpec& noise)
{
    const double keep = signal_retention(noise);
    if (noise.is_noiseless()) {
        return clean_expectation;
    }
    return keep * clean_expectation + (1.0 - keep) * std::ldexp(observable_trace, -n_qubits);
}

} // namespace qnnbench::sim
