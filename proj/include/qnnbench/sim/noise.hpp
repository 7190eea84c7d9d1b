#pragma once

namespace qnnbench::sim {

/// Global depolarizing noise applied once per trainable layer.
struct NoiseSpec {
    double per_layer_depolarizing_p = 0.0;
    int layer_count = 0;

    bool is_noiseless() const { return per_layer_depolarizing_p == 0.0 || layer_count == 0; }
};

/// Validates p in [0, 1] and layer_count >= 0; throws std::invalid_argument.
void validate(const NoiseSpec& noise);

/// Surviving signal fraction (1 - p)^layer_count.
double signal_retention(const NoiseSpec& noise);

/// Expectation after the depolarizing channels:
///   (1-p)^L e + (1 - (1-p)^L) Tr(O) / 2^n.
/// Computed analytically; no density matrix is formed.
double apply_depolarizing(double clean_expectation, double observable_trace, int n_qubits,
                          const NoiseSpec& noise);

} // namespace qnnbench::sim
