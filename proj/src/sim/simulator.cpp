#include "qnnbench/sim/simulator.hpp"

#include <stdexcept>
#include <string>

#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::sim {

void validate_gate(int n_qubits, GateKind kind, std::span<const int> qubits, std::span<const double> angles)
{
    const std::string name(gate_name(kind));
    if (static_cast<int>(qubits.size()) != qubit_count(kind)) {
        throw std::invalid_argument(name + ": expected " + std::to_string(qubit_count(kind)) + " qubit(s), got " +
                                    std::to_string(qubits.size()));
    }
    if (static_cast<int>(angles.size()) != angle_count(kind)) {
        throw std::invalid_argument(name + ": expected " + std::to_string(angle_count(kind)) + " angle(s), got " +
                                    std::to_string(angles.size()));
    }
    for (int q : qubits) {
        if (q < 0 || q >= n_qubits) {
            throw std::invalid_argument(name + ": qubit " + std::to_string(q) + " out of range for " +
                                        std::to_string(n_qubits) + " qubits");
        }
    }
    if (qubits.size() == 2 && qubits[0] == qubits[1]) {
        throw std::invalid_argument(name + ": qubits must be distinct");
    }
}

namespace {

void dispatch(StateVector& state, GateKind kind, std::span<const int> q, std::span<const double> angles, bool inverse)
{
    validate_gate(state.n_qubits(), kind, q, angles);
    auto amps = state.amplitudes();
    switch (kind) {
    case GateKind::CNOT:
        kernels::apply_cnot(amps, q[0], q[1]);
        return;
    case GateKind::CZ:
        kernels::apply_cz(amps, q[0], q[1]);
        return;
    case GateKind::CRX:
    case GateKind::CRZ: {
        const double theta = inverse ? -angles[0] : angles[0];
        kernels::apply_controlled_1q(amps, q[0], q[1], kind == GateKind::CRX ? rx(theta) : rz(theta));
        return;
    }
    case GateKind::ZZ: {
        const double theta = inverse ? -angles[0] : angles[0];
        const std::uint64_t mask = (std::uint64_t{1} << q[0]) | (std::uint64_t{1} << q[1]);
        kernels::apply_parity_phase(amps, mask, std::polar(1.0, -theta / 2), std::polar(1.0, theta / 2));
        return;
    }
    default: {
        const Mat2 m = single_qubit_matrix(kind, angles);
        kernels::apply_1q(amps, q[0], inverse ? m.adjoint() : m);
        return;
    }
    }
}

} // namespace

void apply_gate(StateVector& state, GateKind kind, std::span<const int> qubits, std::span<const double> angles)
{
    dispatch(state, kind, qubits, angles, false);
}

void apply_gate_inverse(StateVector& state, GateKind kind, std::span<const int> qubits, std::span<const double> angles)
{
    dispatch(state, kind, qubits, angles, true);
}

} // namespace qnnbench::sim
