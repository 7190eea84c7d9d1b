#include "qnnbench/circuit/builders.hpp"

#include <stdexcept>

namespace qnnbench::circuit {

using sim::GateKind;

namespace {

void check(int n_qubits, int layers)
{
    if (n_qubits < 1 || layers < 1) {
        throw std::invalid_argument("QNN builders need n_qubits >= 1 and layers >= 1");
    }
}

// Ring neighbours q -> q+1 mod n; empty for a single qubit.
std::vector<std::pair<int, int>> ring(int n)
{
    std::vector<std::pair<int, int>> pairs;
    if (n >= 2) {
        for (int q = 0; q < n; ++q) {
            pairs.emplace_back(q, (q + 1) % n);
        }
    }
    return pairs;
}

void add_encoding(ParameterizedCircuit& c, int n)
{
    for (int q = 0; q < n; ++q) {
        c.add(GateKind::RY, {q}, {AngleBinding::feature(q)});
    }
}

void add_rot_column(ParameterizedCircuit& c, int n, int& next_param)
{
    for (int q = 0; q < n; ++q) {
        c.add(GateKind::Rot, {q},
              {AngleBinding::param(next_param), AngleBinding::param(next_param + 1), AngleBinding::param(next_param + 2)});
        next_param += 3;
    }
}

} // namespace

ParameterizedCircuit build_qnnn(int n_qubits, int layers)
{
    check(n_qubits, layers);
    ParameterizedCircuit c(n_qubits, n_qubits, 3 * n_qubits * layers);
    add_encoding(c, n_qubits);
    int next = 0;
    for (int l = 0; l < layers; ++l) {
        c.begin_layer();
        add_rot_column(c, n_qubits, next);
        for (const auto& [a, b] : ring(n_qubits)) {
            c.add(GateKind::CNOT, {a, b});
        }
    }
    c.validate();
    return c;
}

ParameterizedCircuit build_qenn(int n_qubits, int layers)
{
    check(n_qubits, layers);
    const auto pairs = ring(n_qubits);
    const int per_layer = 3 * n_qubits + static_cast<int>(pairs.size());
    ParameterizedCircuit c(n_qubits, n_qubits, per_layer * layers);
    int next = 0;
    for (int l = 0; l < layers; ++l) {
        c.begin_layer();
        add_encoding(c, n_qubits);
        add_rot_column(c, n_qubits, next);
        for (const auto& [a, b] : pairs) {
            c.add(GateKind::ZZ, {a, b}, {AngleBinding::param(next++)});
        }
    }
    c.validate();
    return c;
}

ParameterizedCircuit build_qcnn_kernel()
{
    ParameterizedCircuit c(4, 4, 6);
    c.begin_layer();
    for (int q = 0; q < 4; ++q) {
        c.add(GateKind::RX, {q}, {AngleBinding::feature(q)});
    }
    c.add(GateKind::CRZ, {0, 1}, {AngleBinding::param(0)});
    c.add(GateKind::CRZ, {1, 2}, {AngleBinding::param(1)});
    c.add(GateKind::CRZ, {2, 3}, {AngleBinding::param(2)});
    c.add(GateKind::CRX, {3, 0}, {AngleBinding::param(3)});
    c.add(GateKind::CRX, {0, 2}, {AngleBinding::param(4)});
    c.add(GateKind::CRX, {1, 3}, {AngleBinding::param(5)});
    c.validate();
    return c;
}

ParameterizedCircuit build(const QnnArchitecture& arch)
{
    return arch.kind == QnnKind::QNNN ? build_qnnn(arch.n_qubits, arch.layers) : build_qenn(arch.n_qubits, arch.layers);
}

} // namespace qnnbench::circuit
