#include "qnnbench/circuit/program.hpp"

#include <map>

#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::circuit {

using sim::GateKind;
using sim::Pauli;
using sim::PauliString;
namespace kernels = sim::kernels;

sim::Mat2 local_generator(const DerivativeTerm& term, int qubit)
{
    const bool x = (term.generator.x_mask >> qubit) & 1U, z = (term.generator.z_mask >> qubit) & 1U;
    if (x && z) {
        return sim::pauli_y();
    }
    return x ? sim::pauli_x() : sim::pauli_z();
}

bool Step::touches(int qubit) const
{
    switch (kind) {
    case Kind::OneQubit: return q0 == qubit;
    case Kind::ParityPhase: return (mask >> qubit) & 1U;
    default: return q0 == qubit || q1 == qubit;
    }
}

void Step::apply(std::span<Complex> amps) const
{
    switch (kind) {
    case Kind::OneQubit: kernels::apply_1q(amps, q0, matrix); break;
    case Kind::Controlled: kernels::apply_controlled_1q(amps, q0, q1, matrix); break;
    case Kind::Cnot: kernels::apply_cnot(amps, q0, q1); break;
    case Kind::Cz: kernels::apply_cz(amps, q0, q1); break;
    case Kind::ParityPhase: kernels::apply_parity_phase(amps, mask, even, odd); break;
    }
}

void Step::apply_inverse(std::span<Complex> amps) const
{
    switch (kind) {
    case Kind::OneQubit: kernels::apply_1q(amps, q0, matrix.adjoint()); break;
    case Kind::Controlled: kernels::apply_controlled_1q(amps, q0, q1, matrix.adjoint()); break;
    case Kind::Cnot: kernels::apply_cnot(amps, q0, q1); break;
    case Kind::Cz: kernels::apply_cz(amps, q0, q1); break;
    case Kind::ParityPhase: kernels::apply_parity_phase(amps, mask, std::conj(even), std::conj(odd)); break;
    }
}

std::vector<kernels::ParityPhase> DiagonalBlock::phases() const
{
    std::vector<kernels::ParityPhase> out;
    out.reserve(gates.size());
    for (const Step& s : gates) {
        out.push_back({s.mask, s.even, s.odd});
    }
    return out;
}

namespace {

Step one_qubit(int q, const sim::Mat2& m)
{
    Step s;
    s.kind = Step::Kind::OneQubit;
    s.q0 = q;
    s.matrix = m;
    return s;
}

void add_derivative(Step& s, const AngleBinding& b, double coefficient, PauliString generator)
{
    if (b.kind != AngleBinding::Kind::Param) {
        return;
    }
    s.derivatives[s.derivative_count++] = {b.index, coefficient, generator};
}

} // namespace

Program compile(const ParameterizedCircuit& circuit, std::span<const double> features, std::span<const double> params)
{
    circuit.check_inputs(features, params);
    Program prog;
    prog.n_qubits = circuit.n_qubits();
    prog.n_params = circuit.n_params();
    prog.steps.reserve(circuit.ops().size() + 2 * circuit.n_qubits());
    for (const CircuitOp& op : circuit.ops()) {
        std::array<double, 3> angle{};
        for (std::size_t k = 0; k < op.angles.size(); ++k) {
            angle[k] = op.angles[k].resolve(features, params);
        }
        const int a = op.qubits[0];
        const int b = op.qubits.size() > 1 ? op.qubits[1] : 0;
        switch (op.kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
            prog.steps.push_back(one_qubit(a, sim::single_qubit_matrix(op.kind, {})));
            break;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ: {
            Step s = one_qubit(a, sim::single_qubit_matrix(op.kind, {angle.data(), 1}));
            const Pauli p = op.kind == GateKind::RX ? Pauli::X : (op.kind == GateKind::RY ? Pauli::Y : Pauli::Z);
            add_derivative(s, op.angles[0], 1.0, PauliString::single(p, a));
            prog.steps.push_back(s);
            break;
        }
        case GateKind::Rot: {
            const sim::Mat2 mats[3] = {sim::rx(angle[0]), sim::ry(angle[1]), sim::rz(angle[2])};
            const Pauli gens[3] = {Pauli::X, Pauli::Y, Pauli::Z};
            for (int k = 0; k < 3; ++k) {
                Step s = one_qubit(a, mats[k]);
                add_derivative(s, op.angles[k], 1.0, PauliString::single(gens[k], a));
                prog.steps.push_back(s);
            }
            break;
        }
        case GateKind::CNOT:
        case GateKind::CZ: {
            Step s;
            s.kind = op.kind == GateKind::CNOT ? Step::Kind::Cnot : Step::Kind::Cz;
            s.q0 = a;
            s.q1 = b;
            prog.steps.push_back(s);
            break;
        }
        case GateKind::CRX:
        case GateKind::CRZ: {
            // CR_P(t) = R_P(t/2) on the target times exp(+i t/4 Z_c P_t)
            Step s;
            s.kind = Step::Kind::Controlled;
            s.q0 = a;
            s.q1 = b;
            const bool is_x = op.kind == GateKind::CRX;
            s.matrix = is_x ? sim::rx(angle[0]) : sim::rz(angle[0]);
            const Pauli p = is_x ? Pauli::X : Pauli::Z;
            add_derivative(s, op.angles[0], 0.5, PauliString::single(p, b));
            add_derivative(s, op.angles[0], -0.5, PauliString::single(Pauli::Z, a).times(p, b));
            prog.steps.push_back(s);
            break;
        }
        case GateKind::ZZ: {
            Step s;
            s.kind = Step::Kind::ParityPhase;
            s.q0 = a;
            s.q1 = b;
            s.mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
            s.even = std::polar(1.0, -angle[0] / 2);
            s.odd = std::polar(1.0, angle[0] / 2);
            add_derivative(s, op.angles[0], 1.0, PauliString::single(Pauli::Z, a).times(Pauli::Z, b));
            prog.steps.push_back(s);
            break;
        }
        }
    }
    return prog;
}

FusedProgram fuse(const Program& program)
{
    FusedProgram out;
    out.n_qubits = program.n_qubits;
    out.n_params = program.n_params;
    std::map<int, FusedBlock> pending;
    auto flush = [&](int q) {
        auto it = pending.find(q);
        if (it != pending.end()) {
            out.segments.emplace_back(std::move(it->second));
            pending.erase(it);
        }
    };
    const auto& steps = program.steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Step& s = steps[i];
        if (s.kind == Step::Kind::ParityPhase) {
            std::size_t end = i;
            std::uint64_t touched = 0;
            while (end < steps.size() && steps[end].kind == Step::Kind::ParityPhase) {
                touched |= steps[end++].mask;
            }
            if (end - i > 1) {
                for (int q = 0; q < program.n_qubits; ++q) {
                    if ((touched >> q) & 1U) {
                        flush(q);
                    }
                }
                out.segments.emplace_back(DiagonalBlock{{steps.begin() + static_cast<std::ptrdiff_t>(i),
                                                         steps.begin() + static_cast<std::ptrdiff_t>(end)}});
                i = end - 1;
                continue;
            }
        }
        if (s.kind == Step::Kind::Cnot) {
            std::size_t end = i;
            while (end < steps.size() && steps[end].kind == Step::Kind::Cnot) {
                ++end;
            }
            if (end - i > 1) {
                PermutationBlock perm;
                perm.gates.assign(steps.begin() + static_cast<std::ptrdiff_t>(i),
                                  steps.begin() + static_cast<std::ptrdiff_t>(end));
                for (const Step& g : perm.gates) {
                    flush(g.q0);
                    flush(g.q1);
                }
                // CNOT(c, t): i -> i ^ (bit c of i) << t, an involution; the run's
                // inverse applies the gates last to first
                auto cnot = [](const Step& g, std::uint64_t v) { return v ^ (((v >> g.q0) & 1U) << g.q1); };
                for (int b = 0; b < program.n_qubits; ++b) {
                    std::uint64_t fwd = std::uint64_t{1} << b, inv = fwd;
                    for (auto g = perm.gates.rbegin(); g != perm.gates.rend(); ++g) {
                        inv = cnot(*g, inv); // src of the forward map is the inverse map
                    }
                    for (const Step& g : perm.gates) {
                        fwd = cnot(g, fwd);
                    }
                    perm.forward_src.push_back(inv);
                    perm.inverse_src.push_back(fwd);
                }
                out.segments.emplace_back(std::move(perm));
                i = end - 1;
                continue;
            }
        }
        if (s.kind == Step::Kind::OneQubit) {
            auto [it, fresh] = pending.try_emplace(s.q0);
            FusedBlock& block = it->second;
            if (fresh) {
                block.qubit = s.q0;
                block.product = s.matrix;
            } else {
                block.product = s.matrix * block.product;
            }
            block.gates.push_back(s);
            continue;
        }
        for (int q = 0; q < program.n_qubits; ++q) {
            if (s.touches(q)) {
                flush(q);
            }
        }
        out.segments.emplace_back(s);
    }
    while (!pending.empty()) {
        flush(pending.begin()->first);
    }
    return out;
}

void run(const Program& program, sim::StateVector& state)
{
    for (const Step& s : program.steps) {
        s.apply(state.amplitudes());
    }
}

void apply_segment(const FusedProgram& program, std::size_t index, std::span<Complex> amps,
                   std::vector<Complex>& scratch, std::vector<Complex>& table)
{
    const auto& seg = program.segments[index];
    if (const auto* block = std::get_if<FusedBlock>(&seg)) {
        kernels::apply_1q(amps, block->qubit, block->product);
    } else if (const auto* diag = std::get_if<DiagonalBlock>(&seg)) {
        if (table.empty()) {
            table.resize(amps.size());
            kernels::parity_phase_table(program.n_qubits, diag->phases(), table);
        }
        kernels::apply_diagonal(amps, table);
    } else if (const auto* perm = std::get_if<PermutationBlock>(&seg)) {
        scratch.resize(amps.size());
        kernels::permute_basis(amps, perm->forward_src, scratch);
    } else {
        std::get<Step>(seg).apply(amps);
    }
}

void run(const FusedProgram& program, sim::StateVector& state)
{
    std::vector<Complex> scratch, table;
    for (std::size_t k = 0; k < program.segments.size(); ++k) {
        table.clear();
        apply_segment(program, k, state.amplitudes(), scratch, table);
    }
}

void run_with_insertion(const Program& program, sim::StateVector& state, std::size_t after_step,
                        const PauliString& generator, double angle)
{
    for (std::size_t i = 0; i < program.steps.size(); ++i) {
        program.steps[i].apply(state.amplitudes());
        if (i == after_step) {
            kernels::apply_pauli_rotation(state.amplitudes(), generator, angle);
        }
    }
}

} // namespace qnnbench::circuit
