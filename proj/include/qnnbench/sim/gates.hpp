#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qnnbench/common.hpp"

namespace qnnbench::sim {

enum class GateKind { H, X, Y, Z, RX, RY, RZ, Rot, CNOT, CZ, CRX, CRZ, ZZ };

inline constexpr std::array<GateKind, 13> kAllGateKinds = {
    GateKind::H,  GateKind::X,    GateKind::Y,  GateKind::Z,   GateKind::RX,
    GateKind::RY, GateKind::RZ,   GateKind::Rot, GateKind::CNOT, GateKind::CZ,
    GateKind::CRX, GateKind::CRZ, GateKind::ZZ};

/// Number of rotation angles the gate takes.
int angle_count(GateKind kind);
/// Number of qubits the gate acts on.
int qubit_count(GateKind kind);

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);

/// Row-major 2x2 complex matrix.
struct Mat2 {
    Complex m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};

    static Mat2 identity() { return {}; }
    Mat2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
    friend Mat2 operator*(const Mat2& a, const Mat2& b)
    {
        return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
                a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
    }
    friend Mat2 operator*(Complex s, const Mat2& a) { return {s * a.m00, s * a.m01, s * a.m10, s * a.m11}; }
    friend Mat2 operator+(const Mat2& a, const Mat2& b)
    {
        return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
    }
};

Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 rx(double theta);
Mat2 ry(double theta);
Mat2 rz(double theta);
/// Rot(a, b, c) = RZ(c) RY(b) RX(a): RX acts on the state first.
Mat2 rot(double a, double b, double c);

/// 2x2 matrix of a single-qubit gate kind (H, X, Y, Z, RX, RY, RZ, Rot).
Mat2 single_qubit_matrix(GateKind kind, std::span<const double> angles);

/// Dense unitary of any gate kind, row-major, in the local basis where bit k
/// of the local index is the value of the k-th listed qubit. For controlled
/// gates the first listed qubit is the control.
std::vector<Complex> gate_unitary(GateKind kind, std::span<const double> angles);

} // namespace qnnbench::sim
