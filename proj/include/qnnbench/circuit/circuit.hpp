#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qnnbench/sim/gates.hpp"
#include "qnnbench/sim/state_vector.hpp"

namespace qnnbench::circuit {

/// Where a gate angle comes from: a literal, a scaled data feature, or a
/// trainable parameter.
struct AngleBinding {
    enum class Kind { Constant, Feature, Param };

    Kind kind = Kind::Constant;
    double value = 0.0; // literal angle, or feature scale
    int index = 0;      // feature or parameter index

    static AngleBinding constant(double angle) { return {Kind::Constant, angle, 0}; }
    static AngleBinding feature(int index, double scale = 1.0) { return {Kind::Feature, scale, index}; }
    static AngleBinding param(int index) { return {Kind::Param, 1.0, index}; }

    double resolve(std::span<const double> features, std::span<const double> params) const;

    friend bool operator==(const AngleBinding&, const AngleBinding&) = default;
};

struct CircuitOp {
    sim::GateKind kind;
    std::vector<int> qubits;
    std::vector<AngleBinding> angles;

    friend bool operator==(const CircuitOp&, const CircuitOp&) = default;
};

/// Ordered gate list whose angles are bound to constants, features or
/// trainable parameters. Immutable once built; share freely.
class ParameterizedCircuit {
public:
    ParameterizedCircuit(int n_qubits, int n_features, int n_params);

    /// Appends an op; throws std::invalid_argument on arity, qubit or index errors.
    void add(sim::GateKind kind, std::vector<int> qubits, std::vector<AngleBinding> angles = {});
    /// Records that a trainable layer starts at the next op.
    void begin_layer();

    int n_qubits() const { return n_qubits_; }
    int n_features() const { return n_features_; }
    int n_params() const { return n_params_; }
    const std::vector<CircuitOp>& ops() const { return ops_; }
    const std::vector<std::size_t>& layer_boundaries() const { return layer_boundaries_; }
    int layer_count() const { return static_cast<int>(layer_boundaries_.size()); }

    /// Throws unless every parameter index is used at least once.
    void validate() const;

    /// Throws std::invalid_argument when the vectors do not match n_features / n_params.
    void check_inputs(std::span<const double> features, std::span<const double> params) const;

    friend bool operator==(const ParameterizedCircuit&, const ParameterizedCircuit&) = default;

private:
    int n_qubits_;
    int n_features_;
    int n_params_;
    std::vector<CircuitOp> ops_;
    std::vector<std::size_t> layer_boundaries_;
};

/// Evolves |0...0> through the bound circuit.
sim::StateVector bind_and_run(const ParameterizedCircuit& circuit, std::span<const double> features,
                              std::span<const double> params);

/// One op per line, `GATE q0[,q1] binding[,binding,binding]`, preceded by
/// `qubits`, `features` and `params` header lines. A `layer` line marks a
/// trainable-layer boundary. Bindings print as `t<k>` (parameter),
/// `x<j>` or `x<j>*<scale>` (feature), or a bare number (constant).
std::string to_text(const ParameterizedCircuit& circuit);
ParameterizedCircuit from_text(std::string_view text);

} // namespace qnnbench::circuit
