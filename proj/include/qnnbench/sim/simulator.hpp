#pragma once

#include <span>

#include "qnnbench/sim/gates.hpp"
#include "qnnbench/sim/state_vector.hpp"

namespace qnnbench::sim {

/// Applies one gate in place. Qubits must be distinct and in range and the
/// angle count must match the gate's arity; violations throw
/// std::invalid_argument before the state is touched.
void apply_gate(StateVector& state, GateKind kind, std::span<const int> qubits,
                std::span<const double> angles = {});

/// Applies the inverse (adjoint) of the gate in place. Same validation.
void apply_gate_inverse(StateVector& state, GateKind kind, std::span<const int> qubits,
                        std::span<const double> angles = {});

/// Throws std::invalid_argument unless the qubits/angles suit the gate.
void validate_gate(int n_qubits, GateKind kind, std::span<const int> qubits, std::span<const double> angles);

} // namespace qnnbench::sim
