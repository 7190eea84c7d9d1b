#include <bit>
#include <vector>

#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::sim::kernels::serial {

namespace {

bool has(std::size_t i, int q) { return (i >> q) & 1U; }

} // namespace

void apply_1q(std::span<Complex> amps, int qubit, const Mat2& m)
{
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (has(i, qubit)) {
            continue;
        }
        const Complex v0 = amps[i], v1 = amps[i | bit];
        amps[i] = m.m00 * v0 + m.m01 * v1;
        amps[i | bit] = m.m10 * v0 + m.m11 * v1;
    }
}

void apply_controlled_1q(std::span<Complex> amps, int control, int target, const Mat2& m)
{
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (!has(i, control) || has(i, target)) {
            continue;
        }
        const Complex v0 = amps[i], v1 = amps[i | tbit];
        amps[i] = m.m00 * v0 + m.m01 * v1;
        amps[i | tbit] = m.m10 * v0 + m.m11 * v1;
    }
}

void apply_cnot(std::span<Complex> amps, int control, int target)
{
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (has(i, control) && !has(i, target)) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

void apply_cz(std::span<Complex> amps, int a, int b)
{
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (has(i, a) && has(i, b)) {
            amps[i] = -amps[i];
        }
    }
}

void apply_parity_phase(std::span<Complex> amps, std::uint64_t mask, Complex even, Complex odd)
{
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] *= (std::popcount(i & mask) % 2 == 0) ? even : odd;
    }
}

void apply_pauli(std::span<Complex> amps, const PauliString& p)
{
    std::vector<Complex> out(amps.size());
    const Complex g = p.global_phase();
    for (std::size_t j = 0; j < amps.size(); ++j) {
        const double sign = (std::popcount(j & p.z_mask) % 2 == 0) ? 1.0 : -1.0;
        out[j ^ p.x_mask] = g * sign * amps[j];
    }
    std::copy(out.begin(), out.end(), amps.begin());
}

void apply_dense(std::span<Complex> amps, std::span<const int> qubits, std::span<const Complex> matrix)
{
    const std::size_t k = qubits.size();
    const std::size_t local_dim = std::size_t{1} << k;
    std::size_t mask = 0;
    for (int q : qubits) {
        mask |= std::size_t{1} << q;
    }
    std::vector<std::size_t> idx(local_dim);
    std::vector<Complex> in(local_dim);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t l = 0; l < local_dim; ++l) {
            std::size_t i = base;
            for (std::size_t j = 0; j < k; ++j) {
                if ((l >> j) & 1U) {
                    i |= std::size_t{1} << qubits[j];
                }
            }
            idx[l] = i;
            in[l] = amps[i];
        }
        for (std::size_t r = 0; r < local_dim; ++r) {
            Complex acc{0.0, 0.0};
            for (std::size_t c = 0; c < local_dim; ++c) {
                acc += matrix[r * local_dim + c] * in[c];
            }
            amps[idx[r]] = acc;
        }
    }
}

double norm_squared(std::span<const Complex> amps)
{
    double acc = 0.0;
    for (const Complex& v : amps) {
        acc += std::norm(v);
    }
    return acc;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b)
{
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

Complex pauli_cross(std::span<const Complex> a, std::span<const Complex> b, const PauliString& p)
{
    std::vector<Complex> pb(b.begin(), b.end());
    apply_pauli(pb, p);
    return inner(a, pb);
}

Mat2 cross_matrix(std::span<const Complex> a, std::span<const Complex> b, int qubit)
{
    const std::size_t bit = std::size_t{1} << qubit;
    Mat2 m{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j0 = i & ~bit;
        const Complex v0 = std::conj(a[i]) * b[j0];
        const Complex v1 = std::conj(a[i]) * b[j0 | bit];
        if (has(i, qubit)) {
            m.m10 += v0;
            m.m11 += v1;
        } else {
            m.m00 += v0;
            m.m01 += v1;
        }
    }
    return m;
}

} // namespace qnnbench::sim::kernels::serial
