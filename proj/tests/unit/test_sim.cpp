#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "qnnbench/sim/kernels.hpp"
#include "qnnbench/sim/noise.hpp"
#include "qnnbench/sim/observable.hpp"
#include "qnnbench/sim/simulator.hpp"

using namespace qnnbench;
using namespace qnnbench::sim;

namespace {

std::vector<int> pick_qubits(std::mt19937_64& rng, int n_qubits, int count)
{
    std::vector<int> all(n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
        all[q] = q;
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    return all;
}

double max_diff(std::span<const Complex> a, std::span<const Complex> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

TEST_CASE("apply_gate basis actions")
{
    SUBCASE("H on |0>")
    {
        StateVector s(1);
        apply_gate(s, GateKind::H, std::vector<int>{0});
        CHECK(s[0].real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
        CHECK(s[1].real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    }
    SUBCASE("CNOT(0 -> 1) maps |10> to |11>")
    {
        // |q0 q1> = |1 0> is amplitude index 1 (qubit 0 is the low bit)
        StateVector s = StateVector::basis(2, 0b01);
        apply_gate(s, GateKind::CNOT, std::vector<int>{0, 1});
        CHECK(std::abs(s[0b11] - Complex{1.0}) < 1e-15);
    }
    SUBCASE("RY(pi) on |0> reaches |1>")
    {
        StateVector s(1);
        apply_gate(s, GateKind::RY, std::vector<int>{0}, std::vector<double>{kPi});
        CHECK(std::abs(std::norm(s[1]) - 1.0) < 1e-12);
    }
}

TEST_CASE("apply_gate rejects bad arguments before touching the state")
{
    StateVector s = StateVector::basis(3, 5);
    const std::vector<Complex> before(s.amplitudes().begin(), s.amplitudes().end());
    CHECK_THROWS_AS(apply_gate(s, GateKind::H, std::vector<int>{3}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(s, GateKind::RX, std::vector<int>{0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(s, GateKind::Rot, std::vector<int>{0}, std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(s, GateKind::CNOT, std::vector<int>{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(s, GateKind::ZZ, std::vector<int>{0}, std::vector<double>{1.0}), std::invalid_argument);
    CHECK(max_diff(s.amplitudes(), before) == 0.0);
}

TEST_CASE("expectation of Z on simple states")
{
    const Observable z0 = Observable::pauli_z(0);
    StateVector zero(1);
    CHECK(expectation(zero, z0) == 1.0);

    StateVector plus(1);
    apply_gate(plus, GateKind::H, std::vector<int>{0});
    CHECK(std::abs(expectation(plus, z0)) < 1e-12);

    // <Z> = cos(theta) for RY(theta)|0>
    StateVector tilted(1);
    apply_gate(tilted, GateKind::RY, std::vector<int>{0}, std::vector<double>{kPi / 3});
    CHECK(expectation(tilted, z0) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(expectation(zero, Observable::pauli_z(1)), std::out_of_range);
}

TEST_CASE("expectation is real and leaves the state unchanged")
{
    std::mt19937_64 rng(7);
    const Observable obs({{0.7, {{0, Pauli::X}, {2, Pauli::Y}}}, {-0.3, {{1, Pauli::Z}}}, {0.25, {}}});
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector s = testing::random_state(rng, 4);
        const std::vector<Complex> before(s.amplitudes().begin(), s.amplitudes().end());
        double total = 0.0;
        for (const auto& [c, p] : obs.strings()) {
            const Complex e = kernels::pauli_cross(s.amplitudes(), s.amplitudes(), p);
            CHECK(std::abs(e.imag()) < 1e-10);
            total += c * e.real();
        }
        CHECK(expectation(s, obs) == doctest::Approx(total).epsilon(1e-14));
        CHECK(max_diff(s.amplitudes(), before) == 0.0);
    }
}

TEST_CASE("depolarizing transform")
{
    CHECK(apply_depolarizing(0.37, 0.0, 3, {0.0, 4}) == 0.37);
    CHECK(apply_depolarizing(0.37, 0.0, 3, {0.2, 0}) == 0.37);
    CHECK(apply_depolarizing(0.9, 0.0, 2, {1.0, 1}) == 0.0);
    CHECK(apply_depolarizing(0.8, 0.0, 1, {0.3, 1}) == doctest::Approx(0.56).epsilon(1e-15));
    // identity part survives: O = I on 2 qubits has Tr = 4 and <O> = 1 always
    CHECK(apply_depolarizing(1.0, 4.0, 2, {0.4, 3}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(apply_depolarizing(0.1, 0.0, 1, {1.5, 1}), std::invalid_argument);
    CHECK_THROWS_AS(apply_depolarizing(0.1, 0.0, 1, {-0.1, 1}), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double e = u(rng);
        const NoiseSpec noise{p(rng), static_cast<int>(rng() % 6)};
        CHECK(std::abs(apply_depolarizing(e, 0.0, 4, noise)) <= std::abs(e));
    }
}

TEST_CASE("every gate matrix is unitary")
{
    std::mt19937_64 rng(11);
    for (GateKind kind : kAllGateKinds) {
        const auto angles = testing::uniform_vector(rng, angle_count(kind), -4.0, 4.0);
        const auto u = gate_unitary(kind, angles);
        const int d = qubit_count(kind) == 1 ? 2 : 4;
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                Complex acc{0.0};
                for (int k = 0; k < d; ++k) {
                    acc += u[r * d + k] * std::conj(u[c * d + k]);
                }
                CHECK(std::abs(acc - Complex(r == c ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("gate followed by its inverse restores the state")
{
    std::mt19937_64 rng(5);
    for (GateKind kind : kAllGateKinds) {
        for (int trial = 0; trial < 20; ++trial) {
            StateVector s = testing::random_state(rng, 4);
            const std::vector<Complex> before(s.amplitudes().begin(), s.amplitudes().end());
            const auto qubits = pick_qubits(rng, 4, qubit_count(kind));
            const auto angles = testing::uniform_vector(rng, angle_count(kind), -2 * kPi, 2 * kPi);
            apply_gate(s, kind, qubits, angles);
            apply_gate_inverse(s, kind, qubits, angles);
            CHECK(max_diff(s.amplitudes(), before) < 1e-10);
        }
    }
}

TEST_CASE("ZZ equals exp(-i theta/2 Z(x)Z)")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const double theta = testing::uniform_vector(rng, 1, -5.0, 5.0)[0];
        Eigen::Matrix4cd zz = Eigen::Matrix4cd::Zero();
        zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
        const Eigen::Matrix4cd expected = (Complex{0.0, -theta / 2} * zz).exp();
        const auto u = gate_unitary(GateKind::ZZ, std::vector<double>{theta});
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                CHECK(std::abs(u[r * 4 + c] - expected(r, c)) < 1e-12);
            }
        }
        // and the kernel path agrees with the matrix on a random state
        StateVector s = testing::random_state(rng, 3);
        std::vector<Complex> ref(s.amplitudes().begin(), s.amplitudes().end());
        kernels::serial::apply_dense(ref, std::vector<int>{2, 0}, u);
        apply_gate(s, GateKind::ZZ, std::vector<int>{2, 0}, std::vector<double>{theta});
        CHECK(max_diff(s.amplitudes(), ref) < 1e-12);
    }
}

TEST_CASE("specialised kernels match the dense-matrix reference")
{
    std::mt19937_64 rng(17);
    for (GateKind kind : kAllGateKinds) {
        for (int trial = 0; trial < 5; ++trial) {
            StateVector s = testing::random_state(rng, 5);
            const auto qubits = pick_qubits(rng, 5, qubit_count(kind));
            const auto angles = testing::uniform_vector(rng, angle_count(kind), -4.0, 4.0);
            std::vector<Complex> ref(s.amplitudes().begin(), s.amplitudes().end());
            kernels::serial::apply_dense(ref, qubits, gate_unitary(kind, angles));
            apply_gate(s, kind, qubits, angles);
            CHECK_MESSAGE(max_diff(s.amplitudes(), ref) < 1e-13, gate_name(kind));
        }
    }
}

TEST_CASE("parallel kernels match serial kernels above the threshold")
{
    std::mt19937_64 rng(19);
    const int n = 13; // 8192 amplitudes, above kParallelThreshold
    const StateVector a = testing::random_state(rng, n);
    const StateVector b = testing::random_state(rng, n);
    const Mat2 m = rot(0.3, -1.1, 2.4);
    auto copy = [](const StateVector& s) { return std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end()); };

    for (int q : {0, 5, 12}) {
        auto x = copy(a), y = copy(a);
        kernels::apply_1q(x, q, m);
        kernels::serial::apply_1q(y, q, m);
        CHECK(max_diff(x, y) < 1e-14);

        const Mat2 cx = kernels::cross_matrix(a.amplitudes(), b.amplitudes(), q);
        const Mat2 cy = kernels::serial::cross_matrix(a.amplitudes(), b.amplitudes(), q);
        CHECK(std::abs(cx.m00 - cy.m00) + std::abs(cx.m01 - cy.m01) + std::abs(cx.m10 - cy.m10) +
                  std::abs(cx.m11 - cy.m11) <
              1e-12);
    }
    {
        auto x = copy(a), y = copy(a);
        kernels::apply_controlled_1q(x, 7, 2, m);
        kernels::serial::apply_controlled_1q(y, 7, 2, m);
        CHECK(max_diff(x, y) < 1e-14);
        kernels::apply_cnot(x, 3, 11);
        kernels::serial::apply_cnot(y, 3, 11);
        kernels::apply_cz(x, 4, 9);
        kernels::serial::apply_cz(y, 4, 9);
        kernels::apply_parity_phase(x, 0b1000100001, Complex{0.6, 0.8}, Complex{0.0, 1.0});
        kernels::serial::apply_parity_phase(y, 0b1000100001, Complex{0.6, 0.8}, Complex{0.0, 1.0});
        CHECK(max_diff(x, y) < 1e-14);
    }
    const PauliString p = PauliString::single(Pauli::X, 1).times(Pauli::Y, 6).times(Pauli::Z, 12);
    {
        auto x = copy(a), y = copy(a);
        kernels::apply_pauli(x, p);
        kernels::serial::apply_pauli(y, p);
        CHECK(max_diff(x, y) < 1e-15);
    }
    CHECK(std::abs(kernels::pauli_cross(a.amplitudes(), b.amplitudes(), p) -
                   kernels::serial::pauli_cross(a.amplitudes(), b.amplitudes(), p)) < 1e-12);
    CHECK(std::abs(kernels::inner(a.amplitudes(), b.amplitudes()) -
                   kernels::serial::inner(a.amplitudes(), b.amplitudes())) < 1e-12);
    CHECK(std::abs(kernels::norm_squared(a.amplitudes()) - kernels::serial::norm_squared(a.amplitudes())) < 1e-12);
}

TEST_CASE("fused sweep kernels match their unfused serial equivalents")
{
    std::mt19937_64 rng(23);
    auto copy = [](const StateVector& s) { return std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end()); };
    const Mat2 m = rot(-0.7, 0.4, 1.9);
    for (int n : {1, 3, 11, 13}) {
        const StateVector a = testing::random_state(rng, n);
        const StateVector b = testing::random_state(rng, n);
        for (int q = 0; q < n; ++q) {
            auto x = copy(a), y = copy(b), xr = copy(a), yr = copy(b);
            const Mat2 c = kernels::cross_matrix_then_apply(x, y, q, m);
            const Mat2 cr = kernels::serial::cross_matrix(xr, yr, q);
            kernels::serial::apply_1q(xr, q, m);
            kernels::serial::apply_1q(yr, q, m);
            CHECK(max_diff(x, xr) < 1e-14);
            CHECK(max_diff(y, yr) < 1e-14);
            CHECK(std::abs(c.m00 - cr.m00) + std::abs(c.m01 - cr.m01) + std::abs(c.m10 - cr.m10) +
                      std::abs(c.m11 - cr.m11) <
                  1e-12);
        }
    }

    const int n = 12;
    const StateVector a = testing::random_state(rng, n);
    const StateVector b = testing::random_state(rng, n);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::vector<kernels::ParityPhase> phases;
    std::vector<std::uint64_t> masks;
    for (std::uint64_t mask : {0b11ULL, 0b110ULL, 0b100000000001ULL, 0b10100010000ULL, 0b100000000000ULL}) {
        const double t = angle(rng);
        phases.push_back({mask, std::polar(1.0, -t / 2), std::polar(1.0, t / 2)});
        masks.push_back(mask);
    }
    std::vector<Complex> table(a.dim());
    kernels::parity_phase_table(n, phases, table);
    auto x = copy(a), y = copy(a);
    kernels::apply_diagonal(x, table);
    for (const auto& p : phases) {
        kernels::serial::apply_parity_phase(y, p.mask, p.even, p.odd);
    }
    CHECK(max_diff(x, y) < 1e-13);
    kernels::apply_diagonal(x, table, true);
    CHECK(max_diff(x, a.amplitudes()) < 1e-13);

    // a CNOT network as one GF(2)-linear basis permutation
    {
        const std::vector<std::pair<int, int>> cnots{{0, 1}, {1, 2}, {11, 0}, {5, 11}, {2, 7}, {7, 5}};
        std::vector<std::uint64_t> src(n);
        for (int bit = 0; bit < n; ++bit) {
            std::uint64_t v = std::uint64_t{1} << bit;
            for (auto g = cnots.rbegin(); g != cnots.rend(); ++g) {
                v ^= ((v >> g->first) & 1U) << g->second;
            }
            src[bit] = v;
        }
        auto p = copy(a), q = copy(a);
        std::vector<Complex> scratch(a.dim());
        kernels::permute_basis(p, src, scratch);
        for (const auto& [c, t] : cnots) {
            kernels::serial::apply_cnot(q, c, t);
        }
        CHECK(max_diff(p, q) == 0.0);
    }

    std::vector<Complex> overlaps(masks.size());
    kernels::parity_cross(a.amplitudes(), b.amplitudes(), masks, overlaps);
    for (std::size_t k = 0; k < masks.size(); ++k) {
        const PauliString z{0, masks[k]};
        CHECK(std::abs(overlaps[k] - kernels::serial::pauli_cross(a.amplitudes(), b.amplitudes(), z)) < 1e-12);
    }
}

TEST_CASE("pauli rotation equals cos - i sin P")
{
    std::mt19937_64 rng(23);
    const PauliString p = PauliString::single(Pauli::Z, 0).times(Pauli::X, 2);
    const PauliString diag = PauliString::single(Pauli::Z, 1).times(Pauli::Z, 3);
    for (const PauliString& gen : {p, diag}) {
        const StateVector s = testing::random_state(rng, 4);
        std::vector<Complex> rotated(s.amplitudes().begin(), s.amplitudes().end());
        kernels::apply_pauli_rotation(rotated, gen, 0.83);
        std::vector<Complex> ps(s.amplitudes().begin(), s.amplitudes().end());
        kernels::serial::apply_pauli(ps, gen);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const Complex expect = std::cos(0.415) * s[i] - Complex{0.0, std::sin(0.415)} * ps[i];
            CHECK(std::abs(rotated[i] - expect) < 1e-14);
        }
    }
}

TEST_CASE("norm is preserved by random circuits")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        StateVector s(n);
        const int gates = 1 + static_cast<int>(rng() % 100);
        for (int g = 0; g < gates; ++g) {
            GateKind kind = kAllGateKinds[rng() % kAllGateKinds.size()];
            if (n == 1 && qubit_count(kind) == 2) {
                kind = GateKind::Rot;
            }
            apply_gate(s, kind, pick_qubits(rng, n, qubit_count(kind)),
                       testing::uniform_vector(rng, angle_count(kind), -kPi, kPi));
        }
        CHECK(std::abs(s.norm() - 1.0) < 1e-9);
    }
}
