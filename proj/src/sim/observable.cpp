#include "qnnbench/sim/observable.hpp"

#include <stdexcept>
#include <string>

#include "qnnbench/sim/kernels.hpp"

namespace qnnbench::sim {

Observable::Observable(std::vector<Term> terms) : terms_(std::move(terms))
{
    for (const Term& t : terms_) {
        for (const auto& [q, p] : t.paulis) {
            if (q < 0 || q >= 64) {
                throw std::invalid_argument("Observable: qubit index " + std::to_string(q) + " out of range");
            }
        }
    }
}

Observable Observable::pauli_z(int qubit)
{
    return Observable({Term{1.0, {{qubit, Pauli::Z}}}});
}

int Observable::max_qubit() const
{
    int m = -1;
    for (const Term& t : terms_) {
        if (!t.paulis.empty()) {
            m = std::max(m, t.paulis.rbegin()->first);
        }
    }
    return m;
}

double Observable::trace(int n_qubits) const
{
    double identity = 0.0;
    for (const Term& t : terms_) {
        if (t.paulis.empty()) {
            identity += t.coefficient;
        }
    }
    return std::ldexp(identity, n_qubits);
}

std::vector<std::pair<double, PauliString>> Observable::strings() const
{
    std::vector<std::pair<double, PauliString>> out;
    out.reserve(terms_.size());
    for (const Term& t : terms_) {
        PauliString p;
        for (const auto& [q, pauli] : t.paulis) {
            p = p.times(pauli, q);
        }
        out.emplace_back(t.coefficient, p);
    }
    return out;
}

namespace {

void check_range(const StateVector& state, const Observable& obs)
{
    if (obs.max_qubit() >= state.n_qubits()) {
        throw std::out_of_range("observable references qubit " + std::to_string(obs.max_qubit()) +
                                " on a " + std::to_string(state.n_qubits()) + "-qubit state");
    }
}

} // namespace

double expectation(const StateVector& state, const Observable& obs)
{
    check_range(state, obs);
    double total = 0.0;
    for (const auto& [coef, p] : obs.strings()) {
        total += coef * kernels::pauli_cross(state.amplitudes(), state.amplitudes(), p).real();
    }
    return total;
}

StateVector apply_observable(const Observable& obs, const StateVector& state)
{
    check_range(state, obs);
    std::vector<Complex> acc(state.dim(), Complex{0.0, 0.0});
    std::vector<Complex> scratch(state.dim());
    for (const auto& [coef, p] : obs.strings()) {
        std::copy(state.amplitudes().begin(), state.amplitudes().end(), scratch.begin());
        kernels::apply_pauli(scratch, p);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += coef * scratch[i];
        }
    }
    return StateVector::from_amplitudes(std::move(acc));
}

} // namespace qnnbench::sim
