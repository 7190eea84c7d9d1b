#pragma once

#include <map>
#include <vector>

#include "qnnbench/sim/pauli.hpp"
#include "qnnbench/sim/state_vector.hpp"

namespace qnnbench::sim {

/// Real linear combination of Pauli strings.
class Observable {
public:
    struct Term {
        double coefficient = 1.0;
        std::map<int, Pauli> paulis; // qubit -> Pauli; empty map is the identity
    };

    Observable() = default;
    explicit Observable(std::vector<Term> terms);

    static Observable pauli_z(int qubit);

    const std::vector<Term>& terms() const { return terms_; }
    /// Highest referenced qubit, -1 if none.
    int max_qubit() const;
    /// Tr(O) on n_qubits qubits: 2^n times the identity coefficients.
    double trace(int n_qubits) const;

    /// The terms as bit-mask Pauli strings, with coefficients.
    std::vector<std::pair<double, PauliString>> strings() const;

private:
    std::vector<Term> terms_;
};

/// <psi|O|psi>. Throws std::out_of_range when O references a qubit the
/// state does not have.
double expectation(const StateVector& state, const Observable& obs);

/// O|psi> as a new (unnormalised) state.
StateVector apply_observable(const Observable& obs, const StateVector& state);

} // namespace qnnbench::sim
