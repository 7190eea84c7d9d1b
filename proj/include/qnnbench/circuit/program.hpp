#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qnnbench/circuit/circuit.hpp"
#include "qnnbench/sim/kernels.hpp"
#include "qnnbench/sim/pauli.hpp"

namespace qnnbench::circuit {

/// d/d theta_param of an elementary step U equals (-i/2) coefficient * P * U
/// (P commutes with U, so the factor may sit on either side).
struct DerivativeTerm {
    int param = 0;
    double coefficient = 1.0;
    sim::PauliString generator;
};

/// The term's generator as a 2x2 matrix; valid when it acts only on `qubit`.
sim::Mat2 local_generator(const DerivativeTerm& term, int qubit);

/// A numeric gate after binding. Rot is expanded into RX, RY, RZ steps;
/// controlled rotations carry two generator terms.
struct Step {
    enum class Kind { OneQubit, Controlled, Cnot, Cz, ParityPhase };

    Kind kind = Kind::OneQubit;
    int q0 = 0; // qubit, or control
    int q1 = 0; // target
    sim::Mat2 matrix;
    std::uint64_t mask = 0; // ParityPhase
    Complex even{1.0}, odd{1.0};
    std::array<DerivativeTerm, 2> derivatives{};
    int derivative_count = 0;

    std::span<const DerivativeTerm> derivative_terms() const { return {derivatives.data(), std::size_t(derivative_count)}; }
    bool touches(int qubit) const;
    void apply(std::span<Complex> amps) const;
    void apply_inverse(std::span<Complex> amps) const;
};

/// Consecutive single-qubit steps on one qubit, multiplied into `product`.
struct FusedBlock {
    int qubit = 0;
    sim::Mat2 product;
    std::vector<Step> gates; // in application order
};

/// A run of consecutive parity-phase steps (commuting diagonals), applied in
/// one sweep through a precomputed phase table.
struct DiagonalBlock {
    std::vector<Step> gates;
    std::vector<sim::kernels::ParityPhase> phases() const;
};

/// A run of consecutive CNOT steps, applied as one basis permutation.
/// Columns as for sim::kernels::permute_basis.
struct PermutationBlock {
    std::vector<Step> gates;
    std::vector<std::uint64_t> forward_src; // applies the run
    std::vector<std::uint64_t> inverse_src; // undoes it
};

/// Elementary bound circuit; the reference execution path.
struct Program {
    int n_qubits = 0;
    int n_params = 0;
    std::vector<Step> steps;
};

/// Program with single-qubit runs fused per qubit and parity-phase and
/// CNOT runs merged; the fast execution path.
struct FusedProgram {
    int n_qubits = 0;
    int n_params = 0;
    std::vector<std::variant<Step, FusedBlock, DiagonalBlock, PermutationBlock>> segments;
};

Program compile(const ParameterizedCircuit& circuit, std::span<const double> features,
                std::span<const double> params);
FusedProgram fuse(const Program& program);

/// Applies one fused segment; `scratch` is a state-sized buffer and
/// `table` holds a diagonal segment's phase table (filled when empty).
void apply_segment(const FusedProgram& program, std::size_t index, std::span<Complex> amps,
                   std::vector<Complex>& scratch, std::vector<Complex>& table);

void run(const Program& program, sim::StateVector& state);
void run(const FusedProgram& program, sim::StateVector& state);

/// Runs `program` with exp(-i angle/2 P) inserted right after step `after_step`.
void run_with_insertion(const Program& program, sim::StateVector& state, std::size_t after_step,
                        const sim::PauliString& generator, double angle);

} // namespace qnnbench::circuit
