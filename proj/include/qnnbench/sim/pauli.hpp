#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "qnnbench/common.hpp"

namespace qnnbench::sim {

enum class Pauli { X, Y, Z };

/// Tensor product of single-qubit Paulis stored as bit masks:
///   P|j> = i^{n_y} (-1)^{popcount(j & z_mask)} |j ^ x_mask>
/// where a Y on qubit q sets bit q in both masks.
struct PauliString {
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;

    static PauliString single(Pauli p, int qubit);
    PauliString times(Pauli p, int qubit) const;

    int y_count() const { return std::popcount(x_mask & z_mask); }
    /// i^{n_y}
    Complex global_phase() const;
    /// Highest qubit index referenced, or -1 for the identity.
    int max_qubit() const;
    bool is_identity() const { return x_mask == 0 && z_mask == 0; }
    bool is_diagonal() const { return x_mask == 0; }

    std::string to_string() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;
};

} // namespace qnnbench::sim
