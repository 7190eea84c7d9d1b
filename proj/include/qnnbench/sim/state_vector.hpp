#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qnnbench/common.hpp"

namespace qnnbench::sim {

inline constexpr int kMaxQubits = 30;

/// Dense pure state of n qubits. Amplitude index bit q holds the value of
/// qubit q (qubit 0 is the least significant bit).
class StateVector {
public:
    /// |0...0> on n_qubits qubits.
    explicit StateVector(int n_qubits);

    /// Takes ownership of explicit amplitudes; size must be a power of two.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    /// Computational basis state |index>.
    static StateVector basis(int n_qubits, std::size_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;

private:
    StateVector(int n_qubits, std::vector<Complex> amps);

    int n_qubits_;
    std::vector<Complex> amps_;
};

} // namespace qnnbench::sim
