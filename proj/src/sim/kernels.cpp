#include "qnnbench/sim/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace qnnbench::sim::kernels {

namespace {

using Index = std::int64_t;

// std::complex operator* keeps an Annex G NaN path; the hot loops do not need it.
inline Complex cmul(Complex a, Complex b)
{
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex conj_mul(Complex a, Complex b) // conj(a) * b
{
    return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

inline std::uint64_t insert_zero(std::uint64_t k, int bit)
{
    const std::uint64_t low = (std::uint64_t{1} << bit) - 1;
    return ((k >> bit) << (bit + 1)) | (k & low);
}

inline std::uint64_t insert_two_zeros(std::uint64_t k, int a, int b)
{
    const int lo = std::min(a, b), hi = std::max(a, b);
    return insert_zero(insert_zero(k, lo), hi);
}

inline bool parallel(std::size_t n) { return n >= kParallelThreshold; }

inline double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

// Sum of body(begin, end) over fixed-size chunks, combined in chunk order.
template <class T, class Body>
T chunked_sum(std::size_t n, Body&& body)
{
    const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
    if (chunks <= 1) {
        return body(std::size_t{0}, n);
    }
    std::vector<T> partial(chunks);
#pragma omp parallel for schedule(static) if (parallel(n))
    for (Index c = 0; c < static_cast<Index>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        partial[c] = body(begin, std::min(n, begin + kReduceChunk));
    }
    T total = partial[0];
    for (std::size_t c = 1; c < chunks; ++c) {
        total = total + partial[c];
    }
    return total;
}

// Pairs (i, i | bit) grouped into fixed segments: segment s covers `blocks`
// consecutive blocks of 2 * bit amplitudes, each contributing `len` contiguous
// lower indices. The layout depends only on the state size, so per-segment
// partial sums give thread-count-independent reductions.
struct PairSegments {
    static constexpr std::size_t kPairs = 1024;
    std::size_t bit, len, blocks;
    Index count;
    PairSegments(std::size_t n, int qubit)
        : bit(std::size_t{1} << qubit), len(std::min(bit, kPairs)),
          blocks(bit >= kPairs ? 1 : std::max<std::size_t>(1, std::min(kPairs, n / 2) / bit)),
          count(static_cast<Index>(n / 2 / (len * blocks)))
    {
    }
    std::size_t start(Index s, std::size_t blk) const
    {
        const std::size_t pair0 = static_cast<std::size_t>(s) * len * blocks + blk * len;
        return (pair0 / bit) * 2 * bit + pair0 % bit;
    }
};

} // namespace

void apply_1q(std::span<Complex> amps, int qubit, const Mat2& m)
{
    const double ar = m.m00.real(), ai = m.m00.imag(), br = m.m01.real(), bi = m.m01.imag();
    const double cr = m.m10.real(), ci = m.m10.imag(), dr = m.m11.real(), di = m.m11.imag();
    double* base = reinterpret_cast<double*>(amps.data());
    const PairSegments seg(amps.size(), qubit);
    if (seg.bit < 4) {
        // short runs: one flat loop over pair indices
        const Index half = static_cast<Index>(amps.size() / 2);
        const std::uint64_t low = seg.bit - 1;
#pragma omp parallel for simd schedule(static) if (parallel(amps.size()))
        for (Index k = 0; k < half; ++k) {
            const std::uint64_t i0 = ((static_cast<std::uint64_t>(k) & ~low) << 1) | (static_cast<std::uint64_t>(k) & low);
            double* x = base + 2 * i0;
            double* y = x + 2 * seg.bit;
            const double xr = x[0], xi = x[1], yr = y[0], yi = y[1];
            x[0] = ar * xr - ai * xi + br * yr - bi * yi;
            x[1] = ar * xi + ai * xr + br * yi + bi * yr;
            y[0] = cr * xr - ci * xi + dr * yr - di * yi;
            y[1] = cr * xi + ci * xr + dr * yi + di * yr;
        }
        return;
    }
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index s = 0; s < seg.count; ++s) {
        for (std::size_t blk = 0; blk < seg.blocks; ++blk) {
            double* x = base + 2 * seg.start(s, blk);
            double* y = x + 2 * seg.bit;
#pragma omp simd
            for (std::size_t i = 0; i < seg.len; ++i) {
                const double xr = x[2 * i], xi = x[2 * i + 1], yr = y[2 * i], yi = y[2 * i + 1];
                x[2 * i] = ar * xr - ai * xi + br * yr - bi * yi;
                x[2 * i + 1] = ar * xi + ai * xr + br * yi + bi * yr;
                y[2 * i] = cr * xr - ci * xi + dr * yr - di * yi;
                y[2 * i + 1] = cr * xi + ci * xr + dr * yi + di * yr;
            }
        }
    }
}

namespace {


// Accumulates the cross terms of pair (x, y) of a against (u, v) of b, then
// applies the matrix to both pairs. Arrays are interleaved (re, im).
#define QNNBENCH_CROSS_APPLY(X, Y, U, V)                                                                           \
    {                                                                                                              \
        const double xr = (X)[0], xi = (X)[1], yr = (Y)[0], yi = (Y)[1];                                           \
        const double ur = (U)[0], ui = (U)[1], vr = (V)[0], vi = (V)[1];                                           \
        s00r += xr * ur + xi * ui;                                                                                 \
        s00i += xr * ui - xi * ur;                                                                                 \
        s01r += xr * vr + xi * vi;                                                                                 \
        s01i += xr * vi - xi * vr;                                                                                 \
        s10r += yr * ur + yi * ui;                                                                                 \
        s10i += yr * ui - yi * ur;                                                                                 \
        s11r += yr * vr + yi * vi;                                                                                 \
        s11i += yr * vi - yi * vr;                                                                                 \
        (X)[0] = ar * xr - ai * xi + br * yr - bi * yi;                                                            \
        (X)[1] = ar * xi + ai * xr + br * yi + bi * yr;                                                            \
        (Y)[0] = cr * xr - ci * xi + dr * yr - di * yi;                                                            \
        (Y)[1] = cr * xi + ci * xr + dr * yi + di * yr;                                                            \
        (U)[0] = ar * ur - ai * ui + br * vr - bi * vi;                                                            \
        (U)[1] = ar * ui + ai * ur + br * vi + bi * vr;                                                            \
        (V)[0] = cr * ur - ci * ui + dr * vr - di * vi;                                                            \
        (V)[1] = cr * ui + ci * ur + dr * vi + di * vr;                                                            \
    }

} // namespace

Mat2 cross_matrix_then_apply(std::span<Complex> a, std::span<Complex> b, int qubit, const Mat2& m)
{
    const double ar = m.m00.real(), ai = m.m00.imag(), br = m.m01.real(), bi = m.m01.imag();
    const double cr = m.m10.real(), ci = m.m10.imag(), dr = m.m11.real(), di = m.m11.imag();
    double* pa = reinterpret_cast<double*>(a.data());
    double* pb = reinterpret_cast<double*>(b.data());
    const std::size_t bit = std::size_t{1} << qubit;
    const std::uint64_t low = bit - 1;
    // fixed segments of pair indices, so partial sums do not depend on the thread count
    const std::size_t half = a.size() / 2;
    const std::size_t seg = std::min<std::size_t>(PairSegments::kPairs, half);
    const Index count = static_cast<Index>(half / seg);
    const std::size_t run = std::min(bit, seg);
    std::vector<Mat2> partial(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static) if (parallel(a.size()))
    for (Index s = 0; s < count; ++s) {
        double s00r = 0, s00i = 0, s01r = 0, s01i = 0, s10r = 0, s10i = 0, s11r = 0, s11i = 0;
        const std::uint64_t first = static_cast<std::uint64_t>(s) * seg;
        if (run >= 8) {
            for (std::size_t r0 = 0; r0 < seg; r0 += run) {
                const std::uint64_t k0 = first + r0;
                const std::size_t i0 = 2 * (((k0 & ~low) << 1) | (k0 & low));
                double* x = pa + i0;
                double* y = x + 2 * bit;
                double* u = pb + i0;
                double* v = u + 2 * bit;
#pragma omp simd reduction(+ : s00r, s00i, s01r, s01i, s10r, s10i, s11r, s11i)
                for (std::size_t t = 0; t < run; ++t) {
                    QNNBENCH_CROSS_APPLY(x + 2 * t, y + 2 * t, u + 2 * t, v + 2 * t)
                }
            }
        } else {
#pragma omp simd reduction(+ : s00r, s00i, s01r, s01i, s10r, s10i, s11r, s11i)
            for (std::size_t t = 0; t < seg; ++t) {
                const std::uint64_t k = first + t;
                const std::size_t i0 = 2 * (((k & ~low) << 1) | (k & low));
                QNNBENCH_CROSS_APPLY(pa + i0, pa + i0 + 2 * bit, pb + i0, pb + i0 + 2 * bit)
            }
        }
        partial[static_cast<std::size_t>(s)] = {{s00r, s00i}, {s01r, s01i}, {s10r, s10i}, {s11r, s11i}};
    }
    Mat2 total = partial[0];
    for (std::size_t s = 1; s < partial.size(); ++s) {
        total = total + partial[s];
    }
    return total;
}

#undef QNNBENCH_CROSS_APPLY

void parity_phase_table(int n_qubits, std::span<const ParityPhase> phases, std::span<Complex> table)
{
    table[0] = Complex{1.0, 0.0};
    for (const ParityPhase& p : phases) {
        table[0] = cmul(table[0], p.even);
    }
    // table[j | 2^b] from table[j], j < 2^b: gates containing bit b flip parity
    std::vector<const ParityPhase*> top;
    for (int b = 0; b < n_qubits; ++b) {
        const std::uint64_t bit = std::uint64_t{1} << b;
        top.clear();
        for (const ParityPhase& p : phases) {
            if (p.mask & bit) {
                top.push_back(&p);
            }
        }
        const Index width = static_cast<Index>(bit);
#pragma omp parallel for schedule(static) if (parallel(bit))
        for (Index j = 0; j < width; ++j) {
            Complex v = table[j];
            for (const ParityPhase* p : top) {
                const bool was_odd = std::popcount(static_cast<std::uint64_t>(j) & p->mask) & 1;
                v = was_odd ? cmul(v, conj_mul(p->odd, p->even)) : cmul(v, conj_mul(p->even, p->odd));
            }
            table[j + width] = v;
        }
    }
}

void apply_diagonal(std::span<Complex> amps, std::span<const Complex> diag, bool conjugate)
{
    double* a = reinterpret_cast<double*>(amps.data());
    const double* d = reinterpret_cast<const double*>(diag.data());
    const double sign = conjugate ? -1.0 : 1.0;
    const Index n = static_cast<Index>(amps.size());
#pragma omp parallel for simd schedule(static) if (parallel(amps.size()))
    for (Index i = 0; i < n; ++i) {
        const double dr = d[2 * i], di = sign * d[2 * i + 1], xr = a[2 * i], xi = a[2 * i + 1];
        a[2 * i] = dr * xr - di * xi;
        a[2 * i + 1] = dr * xi + di * xr;
    }
}

void permute_basis(std::span<Complex> amps, std::span<const std::uint64_t> src_columns, std::span<Complex> scratch)
{
    std::copy(amps.begin(), amps.end(), scratch.begin());
    // src is linear over GF(2): src(base ^ t) = src(base) ^ src(t) for t below the chunk size
    const std::size_t chunk = std::min(amps.size(), kReduceChunk);
    std::vector<std::uint64_t> low(chunk, 0);
    for (std::size_t b = 0; (std::size_t{1} << b) < chunk; ++b) {
        const std::size_t half = std::size_t{1} << b;
        for (std::size_t j = 0; j < half; ++j) {
            low[j + half] = low[j] ^ src_columns[b];
        }
    }
    const int chunk_bits = std::countr_zero(chunk);
    const Index chunks = static_cast<Index>(amps.size() / chunk);
    Complex* out = amps.data();
    const Complex* in = scratch.data();
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index c = 0; c < chunks; ++c) {
        std::uint64_t base = 0;
        for (std::size_t b = static_cast<std::size_t>(chunk_bits); b < src_columns.size(); ++b) {
            if ((static_cast<std::uint64_t>(c) >> (b - chunk_bits)) & 1U) {
                base ^= src_columns[b];
            }
        }
        Complex* dst = out + static_cast<std::size_t>(c) * chunk;
        for (std::size_t t = 0; t < chunk; ++t) {
            dst[t] = in[base ^ low[t]];
        }
    }
}

void parity_cross(std::span<const Complex> a, std::span<const Complex> b, std::span<const std::uint64_t> masks,
                  std::span<Complex> out)
{
    const std::size_t k_count = masks.size();
    const std::size_t chunks = (a.size() + kReduceChunk - 1) / kReduceChunk;
    std::vector<Complex> partial(chunks * k_count);
#pragma omp parallel for schedule(static) if (parallel(a.size()))
    for (Index c = 0; c < static_cast<Index>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t len = std::min(a.size(), begin + kReduceChunk) - begin;
        alignas(64) double wr[kReduceChunk], wi[kReduceChunk];
        for (std::size_t t = 0; t < len; ++t) {
            const Complex w = conj_mul(a[begin + t], b[begin + t]);
            wr[t] = w.real();
            wi[t] = w.imag();
        }
        for (std::size_t k = 0; k < k_count; ++k) {
            const std::uint64_t m = masks[k];
            double re = 0.0, im = 0.0;
            if (std::popcount(m) == 2) {
                const int lo = std::countr_zero(m), hi = 63 - std::countl_zero(m);
#pragma omp simd reduction(+ : re, im)
                for (std::size_t t = 0; t < len; ++t) {
                    const std::uint64_t j = begin + t;
                    const double s = 1.0 - 2.0 * static_cast<double>(((j >> lo) ^ (j >> hi)) & 1U);
                    re += s * wr[t];
                    im += s * wi[t];
                }
            } else {
                for (std::size_t t = 0; t < len; ++t) {
                    const double s = parity_sign((begin + t) & m);
                    re += s * wr[t];
                    im += s * wi[t];
                }
            }
            partial[static_cast<std::size_t>(c) * k_count + k] = {re, im};
        }
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        Complex total{0.0, 0.0};
        for (std::size_t c = 0; c < chunks; ++c) {
            total += partial[c * k_count + k];
        }
        out[k] = total;
    }
}

void apply_controlled_1q(std::span<Complex> amps, int control, int target, const Mat2& m)
{
    const std::uint64_t cbit = std::uint64_t{1} << control, tbit = std::uint64_t{1} << target;
    const Index quarter = static_cast<Index>(amps.size() / 4);
    Complex* a = amps.data();
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index k = 0; k < quarter; ++k) {
        const std::uint64_t i0 = insert_two_zeros(static_cast<std::uint64_t>(k), control, target) | cbit;
        const std::uint64_t i1 = i0 | tbit;
        const Complex v0 = a[i0], v1 = a[i1];
        a[i0] = cmul(m.m00, v0) + cmul(m.m01, v1);
        a[i1] = cmul(m.m10, v0) + cmul(m.m11, v1);
    }
}

void apply_cnot(std::span<Complex> amps, int control, int target)
{
    const std::uint64_t cbit = std::uint64_t{1} << control, tbit = std::uint64_t{1} << target;
    const Index quarter = static_cast<Index>(amps.size() / 4);
    Complex* a = amps.data();
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index k = 0; k < quarter; ++k) {
        const std::uint64_t i0 = insert_two_zeros(static_cast<std::uint64_t>(k), control, target) | cbit;
        std::swap(a[i0], a[i0 | tbit]);
    }
}

void apply_cz(std::span<Complex> amps, int qa, int qb)
{
    const std::uint64_t both = (std::uint64_t{1} << qa) | (std::uint64_t{1} << qb);
    const Index quarter = static_cast<Index>(amps.size() / 4);
    Complex* a = amps.data();
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index k = 0; k < quarter; ++k) {
        const std::uint64_t i = insert_two_zeros(static_cast<std::uint64_t>(k), qa, qb) | both;
        a[i] = -a[i];
    }
}

void apply_parity_phase(std::span<Complex> amps, std::uint64_t mask, Complex even, Complex odd)
{
    const Index n = static_cast<Index>(amps.size());
    Complex* a = amps.data();
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index i = 0; i < n; ++i) {
        a[i] = cmul((std::popcount(static_cast<std::uint64_t>(i) & mask) & 1) ? odd : even, a[i]);
    }
}

void apply_pauli(std::span<Complex> amps, const PauliString& p)
{
    const Complex g = p.global_phase();
    Complex* a = amps.data();
    if (p.x_mask == 0) {
        const Index n = static_cast<Index>(amps.size());
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
        for (Index i = 0; i < n; ++i) {
            a[i] = parity_sign(static_cast<std::uint64_t>(i) & p.z_mask) * cmul(g, a[i]);
        }
        return;
    }
    const int high = 63 - std::countl_zero(p.x_mask);
    const Index half = static_cast<Index>(amps.size() / 2);
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index k = 0; k < half; ++k) {
        const std::uint64_t j = insert_zero(static_cast<std::uint64_t>(k), high);
        const std::uint64_t j2 = j ^ p.x_mask;
        // P|j> = g s(j) |j2>, P|j2> = g s(j2) |j>
        const Complex vj = a[j], vj2 = a[j2];
        a[j] = parity_sign(j2 & p.z_mask) * cmul(g, vj2);
        a[j2] = parity_sign(j & p.z_mask) * cmul(g, vj);
    }
}

void apply_pauli_rotation(std::span<Complex> amps, const PauliString& p, double angle)
{
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    const Complex minus_is_g = cmul(Complex{0.0, -s}, p.global_phase());
    Complex* a = amps.data();
    if (p.x_mask == 0) {
        const Complex plus = Complex{c, 0.0} + minus_is_g, minus = Complex{c, 0.0} - minus_is_g;
        const Index n = static_cast<Index>(amps.size());
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
        for (Index i = 0; i < n; ++i) {
            a[i] = cmul((std::popcount(static_cast<std::uint64_t>(i) & p.z_mask) & 1) ? minus : plus, a[i]);
        }
        return;
    }
    const int high = 63 - std::countl_zero(p.x_mask);
    const Index half = static_cast<Index>(amps.size() / 2);
#pragma omp parallel for schedule(static) if (parallel(amps.size()))
    for (Index k = 0; k < half; ++k) {
        const std::uint64_t j = insert_zero(static_cast<std::uint64_t>(k), high);
        const std::uint64_t j2 = j ^ p.x_mask;
        const Complex vj = a[j], vj2 = a[j2];
        a[j] = c * vj + parity_sign(j2 & p.z_mask) * cmul(minus_is_g, vj2);
        a[j2] = c * vj2 + parity_sign(j & p.z_mask) * cmul(minus_is_g, vj);
    }
}

double norm_squared(std::span<const Complex> amps)
{
    return chunked_sum<double>(amps.size(), [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            acc += std::norm(amps[i]);
        }
        return acc;
    });
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b)
{
    return chunked_sum<Complex>(a.size(), [&](std::size_t begin, std::size_t end) {
        Complex acc{0.0, 0.0};
        for (std::size_t i = begin; i < end; ++i) {
            acc += conj_mul(a[i], b[i]);
        }
        return acc;
    });
}

Complex pauli_cross(std::span<const Complex> a, std::span<const Complex> b, const PauliString& p)
{
    // <a|P|b> = g * sum_k conj(a_k) s(k ^ x) b_{k ^ x}
    const Complex sum = chunked_sum<Complex>(a.size(), [&](std::size_t begin, std::size_t end) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = begin; k < end; ++k) {
            const std::uint64_t src = static_cast<std::uint64_t>(k) ^ p.x_mask;
            acc += parity_sign(src & p.z_mask) * conj_mul(a[k], b[src]);
        }
        return acc;
    });
    return cmul(p.global_phase(), sum);
}

Mat2 cross_matrix(std::span<const Complex> a, std::span<const Complex> b, int qubit)
{
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const std::size_t half = a.size() / 2;
    return chunked_sum<Mat2>(half, [&](std::size_t begin, std::size_t end) {
        Mat2 acc{0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = begin; k < end; ++k) {
            const std::uint64_t i0 = insert_zero(k, qubit), i1 = i0 | bit;
            acc.m00 += conj_mul(a[i0], b[i0]);
            acc.m01 += conj_mul(a[i0], b[i1]);
            acc.m10 += conj_mul(a[i1], b[i0]);
            acc.m11 += conj_mul(a[i1], b[i1]);
        }
        return acc;
    });
}

} // namespace qnnbench::sim::kernels
