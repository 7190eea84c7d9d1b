#include "qnnbench/sim/pauli.hpp"

#include <bit>

namespace qnnbench::sim {

PauliString PauliString::single(Pauli p, int qubit)
{
    return PauliString{}.times(p, qubit);
}

PauliString PauliString::times(Pauli p, int qubit) const
{
    PauliString out = *this;
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    if (p == Pauli::X || p == Pauli::Y) {
        out.x_mask |= bit;
    }
    if (p == Pauli::Z || p == Pauli::Y) {
        out.z_mask |= bit;
    }
    return out;
}

Complex PauliString::global_phase() const
{
    switch (y_count() % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

int PauliString::max_qubit() const
{
    const std::uint64_t all = x_mask | z_mask;
    return all == 0 ? -1 : 63 - std::countl_zero(all);
}

std::string PauliString::to_string() const
{
    if (is_identity()) {
        return "I";
    }
    std::string out;
    for (int q = 0; q <= max_qubit(); ++q) {
        const bool x = (x_mask >> q) & 1U, z = (z_mask >> q) & 1U;
        if (!x && !z) {
            continue;
        }
        out += x && z ? 'Y' : (x ? 'X' : 'Z');
        out += std::to_string(q);
    }
    return out;
}

} // namespace qnnbench::sim
