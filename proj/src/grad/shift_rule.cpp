#include <cmath>
#include <stdexcept>

#include "qnnbench/circuit/program.hpp"
#include "qnnbench/grad/gradients.hpp"

namespace qnnbench::grad {

void validate(const ShiftRuleConfig& cfg)
{
    const double turns = cfg.alpha / kPi;
    if (!std::isfinite(cfg.alpha) || std::abs(turns - std::round(turns)) < 1e-12) {
        throw std::invalid_argument("parameter-shift alpha must not be a multiple of pi");
    }
}

std::vector<double> shift_gradient(const circuit::ParameterizedCircuit& circuit, std::span<const double> features,
                                   std::span<const double> params, const sim::Observable& obs,
                                   const ShiftRuleConfig& cfg)
{
    validate(cfg);
    const circuit::Program program = circuit::compile(circuit, features, params);
    const double denom = 2.0 * std::sin(cfg.alpha);
    std::vector<double> grad(circuit.n_params(), 0.0);
    auto shifted = [&](std::size_t step, const sim::PauliString& gen, double shift) {
        sim::StateVector state(circuit.n_qubits());
        circuit::run_with_insertion(program, state, step, gen, shift);
        return sim::expectation(state, obs);
    };
    for (std::size_t i = 0; i < program.steps.size(); ++i) {
        for (const circuit::DerivativeTerm& term : program.steps[i].derivative_terms()) {
            const double plus = shifted(i, term.generator, cfg.alpha);
            const double minus = shifted(i, term.generator, -cfg.alpha);
            grad[term.param] += term.coefficient * (plus - minus) / denom;
        }
    }
    return grad;
}

double gradient_norm(std::span<const std::vector<double>> gradients)
{
    if (gradients.empty()) {
        throw std::invalid_argument("gradient_norm: empty batch");
    }
    double total = 0.0;
    for (const auto& g : gradients) {
        double sq = 0.0;
        for (double v : g) {
            sq += v * v;
        }
        total += std::sqrt(sq);
    }
    return total / static_cast<double>(gradients.size());
}

} // namespace qnnbench::grad
