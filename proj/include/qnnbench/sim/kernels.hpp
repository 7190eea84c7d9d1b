#pragma once

#include <cstdint>
#include <span>

#include "qnnbench/common.hpp"
#include "qnnbench/sim/gates.hpp"
#include "qnnbench/sim/pauli.hpp"

/// Amplitude-array kernels. The functions in `kernels` are the production
/// path: bitmask-indexed pair updates, OpenMP-parallel above a size
/// threshold, with reductions summed over fixed-size chunks so results do
/// not depend on the thread count. `kernels::serial` holds straightforward
/// single-threaded versions kept as a reference for tests and benchmarks.
///
/// No kernel validates its qubit arguments; callers do.
namespace qnnbench::sim::kernels {

/// States at or above this many amplitudes run gate loops in parallel.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 12;
/// Fixed reduction chunk size (amplitudes per partial sum).
inline constexpr std::size_t kReduceChunk = std::size_t{1} << 11;

void apply_1q(std::span<Complex> amps, int qubit, const Mat2& m);
void apply_controlled_1q(std::span<Complex> amps, int control, int target, const Mat2& m);
void apply_cnot(std::span<Complex> amps, int control, int target);
void apply_cz(std::span<Complex> amps, int a, int b);
/// Multiplies amplitude i by `even` when popcount(i & mask) is even, else `odd`.
void apply_parity_phase(std::span<Complex> amps, std::uint64_t mask, Complex even, Complex odd);
/// In-place P|psi>.
void apply_pauli(std::span<Complex> amps, const PauliString& p);
/// In-place exp(-i angle/2 P)|psi>.
void apply_pauli_rotation(std::span<Complex> amps, const PauliString& p, double angle);

double norm_squared(std::span<const Complex> amps);
/// <a|b>
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
/// <a|P|b>
Complex pauli_cross(std::span<const Complex> a, std::span<const Complex> b, const PauliString& p);
/// M(x, y) = sum over the other qubits of conj(a[.., x, ..]) * b[.., y, ..],
/// with x, y the value of `qubit`. Then <a|(A on qubit)|b> = sum_xy A(x, y) M(x, y).
Mat2 cross_matrix(std::span<const Complex> a, std::span<const Complex> b, int qubit);
/// cross_matrix(a, b, qubit), then m applied to `qubit` of both, in one pass.
Mat2 cross_matrix_then_apply(std::span<Complex> a, std::span<Complex> b, int qubit, const Mat2& m);

/// Diagonal factor: `even` where popcount(i & mask) is even, else `odd`.
/// Both must have unit modulus.
struct ParityPhase {
    std::uint64_t mask = 0;
    Complex even{1.0}, odd{1.0};
};
/// Fills `table` (2^n_qubits entries) with the product of the phases.
void parity_phase_table(int n_qubits, std::span<const ParityPhase> phases, std::span<Complex> table);
/// amps[i] *= diag[i], or conj(diag[i]).
void apply_diagonal(std::span<Complex> amps, std::span<const Complex> diag, bool conjugate = false);
/// Basis permutation new[i] = old[src(i)] with src linear over GF(2):
/// src(i) = XOR of src_columns[b] over the set bits b of i (one column per
/// qubit). Any CNOT network has this form. `scratch` must match amps in size.
void permute_basis(std::span<Complex> amps, std::span<const std::uint64_t> src_columns, std::span<Complex> scratch);
/// out[k] = sum_i conj(a_i) b_i (-1)^popcount(i & masks[k])
void parity_cross(std::span<const Complex> a, std::span<const Complex> b, std::span<const std::uint64_t> masks,
                  std::span<Complex> out);

namespace serial {

void apply_1q(std::span<Complex> amps, int qubit, const Mat2& m);
void apply_controlled_1q(std::span<Complex> amps, int control, int target, const Mat2& m);
void apply_cnot(std::span<Complex> amps, int control, int target);
void apply_cz(std::span<Complex> amps, int a, int b);
void apply_parity_phase(std::span<Complex> amps, std::uint64_t mask, Complex even, Complex odd);
void apply_pauli(std::span<Complex> amps, const PauliString& p);
/// Applies a dense k-qubit matrix (row-major, local bit j = qubits[j]).
void apply_dense(std::span<Complex> amps, std::span<const int> qubits, std::span<const Complex> matrix);

double norm_squared(std::span<const Complex> amps);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
Complex pauli_cross(std::span<const Complex> a, std::span<const Complex> b, const PauliString& p);
Mat2 cross_matrix(std::span<const Complex> a, std::span<const Complex> b, int qubit);

} // namespace serial

} // namespace qnnbench::sim::kernels
