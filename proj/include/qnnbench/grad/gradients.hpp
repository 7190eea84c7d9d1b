#pragma once

#include <span>
#include <vector>

#include "qnnbench/circuit/circuit.hpp"
#include "qnnbench/sim/observable.hpp"

namespace qnnbench::grad {

struct ShiftRuleConfig {
    double alpha = 1.5707963267948966; // pi / 2
};

/// Throws std::invalid_argument when alpha is a multiple of pi (the rule's
/// 1 / (2 sin alpha) denominator diverges).
void validate(const ShiftRuleConfig& cfg);

/// Gradient of <O> with respect to every trainable parameter by the
/// parameter-shift rule:
///   dh/dphi = [h(phi + alpha) - h(phi - alpha)] / (2 sin alpha)
/// applied to every Pauli rotation a parameter feeds. Single-Pauli gates
/// cost two circuit runs per parameter; controlled rotations decompose into
/// two commuting Pauli rotations of half angle and cost four.
std::vector<double> shift_gradient(const circuit::ParameterizedCircuit& circuit, std::span<const double> features,
                                   std::span<const double> params, const sim::Observable& obs,
                                   const ShiftRuleConfig& cfg = {});

/// Value and gradient of <O> from one forward run and one reverse sweep
/// over the fused program. Exact for the same gate set as the shift rule;
/// used where 2 P circuit runs per example are too slow.
struct ValueAndGradient {
    double value = 0.0;
    std::vector<double> gradient;
};
ValueAndGradient adjoint_gradient(const circuit::ParameterizedCircuit& circuit, std::span<const double> features,
                                  std::span<const double> params, const sim::Observable& obs);

/// Mean Euclidean norm over a batch of gradient vectors. Throws
/// std::invalid_argument on an empty batch.
double gradient_norm(std::span<const std::vector<double>> gradients);

} // namespace qnnbench::grad
