#include "qnnbench/sim/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qnnbench::sim {

int angle_count(GateKind kind)
{
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRX:
    case GateKind::CRZ:
    case GateKind::ZZ:
        return 1;
    case GateKind::Rot:
        return 3;
    default:
        return 0;
    }
}

int qubit_count(GateKind kind)
{
    switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CRX:
    case GateKind::CRZ:
    case GateKind::ZZ:
        return 2;
    default:
        return 1;
    }
}

std::string_view gate_name(GateKind kind)
{
    switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::Rot: return "Rot";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRZ: return "CRZ";
    case GateKind::ZZ: return "ZZ";
    }
    return "?";
}

std::optional<GateKind> parse_gate_name(std::string_view name)
{
    for (GateKind k : kAllGateKinds) {
        if (gate_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

Mat2 hadamard()
{
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r, r, -r};
}

Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 pauli_y() { return {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}; }
Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Mat2 rx(double theta)
{
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, Complex{0.0, -s}, Complex{0.0, -s}, c};
}

Mat2 ry(double theta)
{
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, -s, s, c};
}

Mat2 rz(double theta)
{
    return {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)};
}

Mat2 rot(double a, double b, double c)
{
    return rz(c) * ry(b) * rx(a);
}

Mat2 single_qubit_matrix(GateKind kind, std::span<const double> angles)
{
    switch (kind) {
    case GateKind::H: return hadamard();
    case GateKind::X: return pauli_x();
    case GateKind::Y: return pauli_y();
    case GateKind::Z: return pauli_z();
    case GateKind::RX: return rx(angles[0]);
    case GateKind::RY: return ry(angles[0]);
    case GateKind::RZ: return rz(angles[0]);
    case GateKind::Rot: return rot(angles[0], angles[1], angles[2]);
    default:
        throw std::invalid_argument("single_qubit_matrix: " + std::string(gate_name(kind)) +
                                    " is not a single-qubit gate");
    }
}

std::vector<Complex> gate_unitary(GateKind kind, std::span<const double> angles)
{
    if (qubit_count(kind) == 1) {
        const Mat2 m = single_qubit_matrix(kind, angles);
        return {m.m00, m.m01, m.m10, m.m11};
    }
    // local index l = b0 | (b1 << 1); b0 is the first listed qubit
    std::vector<Complex> u(16, Complex{0.0, 0.0});
    auto at = [&u](int row, int col) -> Complex& { return u[row * 4 + col]; };
    switch (kind) {
    case GateKind::CNOT:
        at(0, 0) = at(2, 2) = 1.0;
        at(3, 1) = at(1, 3) = 1.0;
        break;
    case GateKind::CZ:
        at(0, 0) = at(1, 1) = at(2, 2) = 1.0;
        at(3, 3) = -1.0;
        break;
    case GateKind::CRX:
    case GateKind::CRZ: {
        const Mat2 m = kind == GateKind::CRX ? rx(angles[0]) : rz(angles[0]);
        at(0, 0) = at(2, 2) = 1.0;
        at(1, 1) = m.m00;
        at(1, 3) = m.m01;
        at(3, 1) = m.m10;
        at(3, 3) = m.m11;
        break;
    }
    case GateKind::ZZ: {
        const Complex same = std::polar(1.0, -angles[0] / 2);
        const Complex diff = std::polar(1.0, angles[0] / 2);
        at(0, 0) = at(3, 3) = same;
        at(1, 1) = at(2, 2) = diff;
        break;
    }
    default:
        break;
    }
    return u;
}

} // namespace qnnbench::sim
