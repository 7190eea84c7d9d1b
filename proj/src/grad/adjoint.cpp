#include <variant>

#include "qnnbench/circuit/program.hpp"
#include "qnnbench/grad/gradients.hpp"
#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::grad {

namespace kernels = sim::kernels;

namespace {

Complex contract(const sim::Mat2& a, const sim::Mat2& m)
{
    return a.m00 * m.m00 + a.m01 * m.m01 + a.m10 * m.m10 + a.m11 * m.m11;
}

} // namespace

ValueAndGradient adjoint_gradient(const circuit::ParameterizedCircuit& circuit, std::span<const double> features,
                                  std::span<const double> params, const sim::Observable& obs)
{
    const circuit::FusedProgram program = circuit::fuse(circuit::compile(circuit, features, params));
    sim::StateVector psi(circuit.n_qubits());
    circuit::run(program, psi);
    sim::StateVector lambda = sim::apply_observable(obs, psi);

    ValueAndGradient out;
    out.value = kernels::inner(psi.amplitudes(), lambda.amplitudes()).real();
    out.gradient.assign(circuit.n_params(), 0.0);
    const Complex minus_half_i{0.0, -0.5};
    std::vector<Complex> overlaps, table;

    for (auto it = program.segments.rbegin(); it != program.segments.rend(); ++it) {
        if (const auto* block = std::get_if<circuit::FusedBlock>(&*it)) {
            const sim::Mat2 cross = kernels::cross_matrix_then_apply(lambda.amplitudes(), psi.amplitudes(), block->qubit,
                                                                     block->product.adjoint());
            sim::Mat2 suffix = sim::Mat2::identity();
            for (auto g = block->gates.rbegin(); g != block->gates.rend(); ++g) {
                for (const circuit::DerivativeTerm& term : g->derivative_terms()) {
                    const sim::Mat2 d = (minus_half_i * term.coefficient) * circuit::local_generator(term, block->qubit);
                    const sim::Mat2 a = suffix * d * suffix.adjoint();
                    out.gradient[term.param] += 2.0 * contract(a, cross).real();
                }
                suffix = suffix * g->matrix;
            }
            continue;
        }
        if (const auto* perm = std::get_if<circuit::PermutationBlock>(&*it)) {
            table.resize(psi.dim());
            kernels::permute_basis(psi.amplitudes(), perm->inverse_src, table);
            kernels::permute_basis(lambda.amplitudes(), perm->inverse_src, table);
            continue;
        }
        if (const auto* diag = std::get_if<circuit::DiagonalBlock>(&*it)) {
            // the gates commute, so each derivative may be taken at the block's output
            std::vector<std::uint64_t> masks;
            for (const circuit::Step& g : diag->gates) {
                masks.push_back(g.mask);
            }
            overlaps.resize(masks.size());
            kernels::parity_cross(lambda.amplitudes(), psi.amplitudes(), masks, overlaps);
            for (std::size_t k = 0; k < masks.size(); ++k) {
                for (const circuit::DerivativeTerm& term : diag->gates[k].derivative_terms()) {
                    out.gradient[term.param] += 2.0 * (minus_half_i * term.coefficient * overlaps[k]).real();
                }
            }
            table.resize(psi.dim());
            kernels::parity_phase_table(program.n_qubits, diag->phases(), table);
            kernels::apply_diagonal(psi.amplitudes(), table, true);
            kernels::apply_diagonal(lambda.amplitudes(), table, true);
            continue;
        }
        const circuit::Step& step = std::get<circuit::Step>(*it);
        for (const circuit::DerivativeTerm& term : step.derivative_terms()) {
            const Complex overlap = kernels::pauli_cross(lambda.amplitudes(), psi.amplitudes(), term.generator);
            out.gradient[term.param] += 2.0 * (minus_half_i * term.coefficient * overlap).real();
        }
        step.apply_inverse(psi.amplitudes());
        step.apply_inverse(lambda.amplitudes());
    }
    return out;
}

} // namespace qnnbench::grad
