#include "qnnbench/sim/state_vector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::sim {

namespace {

void check_qubits(int n_qubits)
{
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: qubit count " + std::to_string(n_qubits) +
                                    " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits)
{
    check_qubits(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amps) : n_qubits_(n_qubits), amps_(std::move(amps)) {}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes)
{
    const std::size_t n = amplitudes.size();
    if (n < 2 || !std::has_single_bit(n)) {
        throw std::invalid_argument("StateVector: amplitude count must be a power of two >= 2, got " +
                                    std::to_string(n));
    }
    const int n_qubits = std::countr_zero(n);
    check_qubits(n_qubits);
    return StateVector(n_qubits, std::move(amplitudes));
}

StateVector StateVector::basis(int n_qubits, std::size_t index)
{
    StateVector s(n_qubits);
    if (index >= s.dim()) {
        throw std::out_of_range("StateVector: basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const
{
    return std::sqrt(kernels::norm_squared(amps_));
}

} // namespace qnnbench::sim
