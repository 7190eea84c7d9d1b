// State-vector kernels: OpenMP versions against their serial references,
// plus whole-circuit gradient costs.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/grad/gradients.hpp"
#include "qnnbench/grad/metric.hpp"
#include "qnnbench/sim/gates.hpp"
#include "qnnbench/sim/kernels.hpp"
#include "qnnbench/sim/observable.hpp"

using namespace qnnbench;
namespace kernels = qnnbench::sim::kernels;

namespace {

std::vector<Complex> random_state(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> v(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& x : v) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto& x : v) {
        x /= std::sqrt(norm);
    }
    return v;
}

template <auto Kernel>
void one_qubit(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    auto v = random_state(n, 1);
    const sim::Mat2 m = sim::rot(0.3, 0.7, -1.1);
    for (auto _ : st) {
        for (int q = 0; q < n; ++q) {
            Kernel(v, q, m);
        }
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(v.size()));
}

template <auto Kernel>
void cnot_ring(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    auto v = random_state(n, 2);
    for (auto _ : st) {
        for (int q = 0; q < n; ++q) {
            Kernel(v, q, (q + 1) % n);
        }
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(v.size()));
}

template <auto Kernel>
void zz_ring(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    auto v = random_state(n, 3);
    const Complex even = std::polar(1.0, -0.2), odd = std::polar(1.0, 0.2);
    for (auto _ : st) {
        for (int q = 0; q < n; ++q) {
            Kernel(v, (std::uint64_t{1} << q) | (std::uint64_t{1} << ((q + 1) % n)), even, odd);
        }
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(v.size()));
}

void zz_ring_fused(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    auto v = random_state(n, 3);
    std::vector<kernels::ParityPhase> phases;
    for (int q = 0; q < n; ++q) {
        phases.push_back({(std::uint64_t{1} << q) | (std::uint64_t{1} << ((q + 1) % n)), std::polar(1.0, -0.2),
                          std::polar(1.0, 0.2)});
    }
    std::vector<Complex> table(v.size());
    for (auto _ : st) {
        kernels::parity_phase_table(n, phases, table);
        kernels::apply_diagonal(v, table);
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(v.size()));
}

void cnot_ring_fused(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    auto v = random_state(n, 2);
    // Columns of the inverse of the ring's GF(2) matrix, found by pushing
    // each basis vector backwards through the CNOTs.
    std::vector<std::uint64_t> src(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
        std::uint64_t x = std::uint64_t{1} << b;
        for (int q = n - 1; q >= 0; --q) {
            if (x >> q & 1) {
                x ^= std::uint64_t{1} << ((q + 1) % n);
            }
        }
        src[static_cast<std::size_t>(b)] = x;
    }
    std::vector<Complex> scratch(v.size());
    for (auto _ : st) {
        kernels::permute_basis(v, src, scratch);
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(v.size()));
}

template <auto Kernel>
void inner_product(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    const auto a = random_state(n, 4), b = random_state(n, 5);
    for (auto _ : st) {
        benchmark::DoNotOptimize(Kernel(a, b));
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(a.size()));
}

template <auto Kernel>
void cross(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    const auto a = random_state(n, 4), b = random_state(n, 5);
    for (auto _ : st) {
        for (int q = 0; q < n; ++q) {
            benchmark::DoNotOptimize(Kernel(a, b, q));
        }
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(a.size()));
}

void cross_then_apply(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    auto a = random_state(n, 4), b = random_state(n, 5);
    const sim::Mat2 m = sim::rot(0.3, 0.7, -1.1);
    for (auto _ : st) {
        for (int q = 0; q < n; ++q) {
            benchmark::DoNotOptimize(kernels::cross_matrix_then_apply(a, b, q, m));
        }
    }
    st.SetItemsProcessed(st.iterations() * n * static_cast<long>(a.size()));
}

struct CircuitInput {
    circuit::ParameterizedCircuit circuit;
    std::vector<double> features, params;
};

CircuitInput qenn_input(int n)
{
    CircuitInput in{circuit::build_qenn(n, 3), {}, {}};
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < in.circuit.n_features(); ++i) {
        in.features.push_back(u(rng));
    }
    for (int i = 0; i < in.circuit.n_params(); ++i) {
        in.params.push_back(u(rng));
    }
    return in;
}

void qenn_adjoint_gradient(benchmark::State& st)
{
    const auto in = qenn_input(static_cast<int>(st.range(0)));
    const auto obs = sim::Observable::pauli_z(0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(grad::adjoint_gradient(in.circuit, in.features, in.params, obs));
    }
}

void qenn_shift_gradient(benchmark::State& st)
{
    const auto in = qenn_input(static_cast<int>(st.range(0)));
    const auto obs = sim::Observable::pauli_z(0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(grad::shift_gradient(in.circuit, in.features, in.params, obs));
    }
}

void qenn_metric(benchmark::State& st)
{
    const auto in = qenn_input(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(grad::quantum_geometric_tensor(in.circuit, in.features, in.params));
    }
}

} // namespace

BENCHMARK(one_qubit<kernels::apply_1q>)->Name("apply_1q/omp")->DenseRange(10, 18, 4);
BENCHMARK(one_qubit<kernels::serial::apply_1q>)->Name("apply_1q/serial")->DenseRange(10, 18, 4);
BENCHMARK(cnot_ring<kernels::apply_cnot>)->Name("cnot_ring/omp")->DenseRange(10, 18, 4);
BENCHMARK(cnot_ring<kernels::serial::apply_cnot>)->Name("cnot_ring/serial")->DenseRange(10, 18, 4);
BENCHMARK(cnot_ring_fused)->Name("cnot_ring/permutation")->DenseRange(10, 18, 4);
BENCHMARK(zz_ring<kernels::apply_parity_phase>)->Name("zz_ring/omp")->DenseRange(10, 18, 4);
BENCHMARK(zz_ring<kernels::serial::apply_parity_phase>)->Name("zz_ring/serial")->DenseRange(10, 18, 4);
BENCHMARK(zz_ring_fused)->Name("zz_ring/diagonal")->DenseRange(10, 18, 4);
BENCHMARK(inner_product<kernels::inner>)->Name("inner/omp")->DenseRange(10, 18, 4);
BENCHMARK(inner_product<kernels::serial::inner>)->Name("inner/serial")->DenseRange(10, 18, 4);
BENCHMARK(cross<kernels::cross_matrix>)->Name("cross_matrix/omp")->DenseRange(10, 18, 4);
BENCHMARK(cross<kernels::serial::cross_matrix>)->Name("cross_matrix/serial")->DenseRange(10, 18, 4);
BENCHMARK(cross_then_apply)->Name("cross_matrix/then_apply")->DenseRange(10, 18, 4);
BENCHMARK(qenn_adjoint_gradient)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(qenn_shift_gradient)->DenseRange(8, 12, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(qenn_metric)->DenseRange(8, 12, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
