#include <type_traits>
#include <variant>

#include "qnnbench/circuit/program.hpp"
#include "qnnbench/grad/metric.hpp"
#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::grad {

namespace kernels = sim::kernels;

namespace {

void scale(std::span<Complex> v, Complex factor)
{
    for (Complex& x : v) {
        x *= factor;
    }
}

} // namespace

MetricTensor quantum_geometric_tensor(const circuit::ParameterizedCircuit& circuit, std::span<const double> features,
                                      std::span<const double> params)
{
    const circuit::FusedProgram program = circuit::fuse(circuit::compile(circuit, features, params));
    const int n_params = circuit.n_params();
    const auto& segments = program.segments;
    sim::StateVector psi(circuit.n_qubits());
    const auto dim = static_cast<Eigen::Index>(psi.dim());
    const Complex minus_half_i{0.0, -0.5};

    std::size_t n_terms_total = 0;
    for (const auto& seg : segments) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, circuit::Step>) {
                    n_terms_total += s.derivative_terms().size();
                } else if constexpr (!std::is_same_v<T, circuit::PermutationBlock>) {
                    for (const auto& g : s.gates) {
                        n_terms_total += g.derivative_terms().size();
                    }
                }
            },
            seg);
    }
    const auto n_terms = static_cast<Eigen::Index>(n_terms_total);
    // reused across calls: fresh multi-megabyte allocations cost page faults
    thread_local Eigen::MatrixXcd deriv;
    deriv.resize(dim, n_terms);

    // Pass 1: run psi forward; every derivative term T gets a column
    // T|psi> taken right after its segment, remembered with the segment it
    // must be evolved from. Terms of one diagonal block commute with the
    // whole block, so they are taken after it.
    std::vector<std::size_t> start;
    std::vector<int> owner;
    std::vector<std::vector<Complex>> tables(segments.size());
    std::vector<Complex> scratch;
    auto add_column = [&](std::size_t seg, int param) -> std::span<Complex> {
        const auto t = static_cast<Eigen::Index>(start.size());
        start.push_back(seg + 1);
        owner.push_back(param);
        std::span<Complex> col(deriv.col(t).data(), static_cast<std::size_t>(dim));
        std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), col.begin());
        return col;
    };
    for (std::size_t k = 0; k < segments.size(); ++k) {
        if (const auto* block = std::get_if<circuit::FusedBlock>(&segments[k])) {
            kernels::apply_1q(psi.amplitudes(), block->qubit, block->product);
            sim::Mat2 suffix = sim::Mat2::identity();
            for (auto g = block->gates.rbegin(); g != block->gates.rend(); ++g) {
                for (const circuit::DerivativeTerm& term : g->derivative_terms()) {
                    const sim::Mat2 d = (minus_half_i * term.coefficient) * circuit::local_generator(term, block->qubit);
                    kernels::apply_1q(add_column(k, term.param), block->qubit, suffix * d * suffix.adjoint());
                }
                suffix = suffix * g->matrix;
            }
        } else if (const auto* diag = std::get_if<circuit::DiagonalBlock>(&segments[k])) {
            circuit::apply_segment(program, k, psi.amplitudes(), scratch, tables[k]);
            for (const circuit::Step& g : diag->gates) {
                for (const circuit::DerivativeTerm& term : g.derivative_terms()) {
                    auto col = add_column(k, term.param);
                    kernels::apply_pauli(col, term.generator);
                    scale(col, minus_half_i * term.coefficient);
                }
            }
        } else if (std::holds_alternative<circuit::PermutationBlock>(segments[k])) {
            circuit::apply_segment(program, k, psi.amplitudes(), scratch, tables[k]);
        } else {
            const auto& step = std::get<circuit::Step>(segments[k]);
            step.apply(psi.amplitudes());
            for (const circuit::DerivativeTerm& term : step.derivative_terms()) {
                auto col = add_column(k, term.param);
                kernels::apply_pauli(col, term.generator);
                scale(col, minus_half_i * term.coefficient);
            }
        }
    }

    // Pass 2: evolve each column to the end on its own (cache-resident).
    for (Eigen::Index t = 0; t < n_terms; ++t) {
        std::span<Complex> col(deriv.col(t).data(), static_cast<std::size_t>(dim));
        for (std::size_t k = start[static_cast<std::size_t>(t)]; k < segments.size(); ++k) {
            circuit::apply_segment(program, k, col, scratch, tables[k]);
        }
    }

    // Term-level metric, then folded onto parameters: d_j = sum of its terms.
    // Re<a|b> is the real dot product of the interleaved (re, im) buffers.
    const Eigen::Map<const Eigen::MatrixXd> real_view(reinterpret_cast<const double*>(deriv.data()), 2 * dim, n_terms);
    Eigen::MatrixXd gt = Eigen::MatrixXd::Zero(n_terms, n_terms);
    gt.selfadjointView<Eigen::Lower>().rankUpdate(real_view.transpose());
    gt = gt.selfadjointView<Eigen::Lower>();
    const Eigen::Map<const Eigen::VectorXcd> psi_view(psi.amplitudes().data(), dim);
    const Eigen::VectorXcd berry_terms = deriv.adjoint() * psi_view; // <d_t|psi>

    Eigen::MatrixXd fold = Eigen::MatrixXd::Zero(n_terms, n_params);
    for (Eigen::Index t = 0; t < n_terms; ++t) {
        fold(t, owner[static_cast<std::size_t>(t)]) = 1.0;
    }
    MetricTensor out;
    out.g = fold.transpose() * gt * fold;
    const Eigen::VectorXcd berry = fold.transpose().cast<Complex>() * berry_terms; // <d_j|psi>
    for (int i = 0; i < n_params; ++i) {
        for (int j = 0; j < n_params; ++j) {
            out.g(i, j) -= (berry(i) * std::conj(berry(j))).real();
        }
    }
    return out;
}

} // namespace qnnbench::grad
