#pragma once

#include <span>

#include <Eigen/Dense>

#include "qnnbench/circuit/circuit.hpp"

namespace qnnbench::grad {

/// Real part of the quantum geometric tensor (Fubini-Study metric).
struct MetricTensor {
    Eigen::MatrixXd g;
};

/// G_ij = <d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>, returned as g = Re G.
/// Each |d_j psi> is built exactly by inserting (-i/2) P_j after the gate
/// that parameter j drives and evolving to the end of the circuit.
MetricTensor quantum_geometric_tensor(const circuit::ParameterizedCircuit& circuit, std::span<const double> features,
                                      std::span<const double> params);

} // namespace qnnbench::grad
