#pragma once

#include <vector>

#include "qnnbench/circuit/circuit.hpp"

namespace qnnbench::circuit {

enum class QnnKind { QNNN, QENN };

struct QnnArchitecture {
    QnnKind kind = QnnKind::QNNN;
    int n_qubits = 1;
    int layers = 3;
    std::vector<int> readout_qubits{0};
};

/// RY(x_j) on every qubit, then `layers` repetitions of [Rot on every qubit,
/// CNOT ring q -> q+1 mod n]. 3 n L parameters.
ParameterizedCircuit build_qnnn(int n_qubits, int layers);

/// `layers` repetitions of [RY(x_j) on every qubit, Rot on every qubit,
/// ZZ ring]. (3n + n) L parameters for n >= 2; a one-qubit ring has no
/// pairs, leaving 3 L.
ParameterizedCircuit build_qenn(int n_qubits, int layers);

/// Four-qubit convolution kernel: RX(pixel_k) on qubit k, then CRZ 0->1,
/// CRZ 1->2, CRZ 2->3, CRX 3->0, CRX 0->2, CRX 1->3 with six parameters.
ParameterizedCircuit build_qcnn_kernel();

ParameterizedCircuit build(const QnnArchitecture& arch);

} // namespace qnnbench::circuit
