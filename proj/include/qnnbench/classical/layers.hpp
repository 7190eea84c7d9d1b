#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qnnbench::classical {

/// Fully-connected stack with ReLU between layers and a linear last layer.
/// Each layer packs a row-major (out x in) weight matrix followed by its bias.
struct DenseStack {
    std::vector<std::size_t> widths;

    std::size_t param_count() const;
    std::size_t input_width() const { return widths.front(); }
    std::size_t output_width() const { return widths.back(); }

    /// Activations of every layer, input first, output last (post-ReLU for
    /// hidden layers).
    std::vector<std::vector<double>> forward(std::span<const double> p, std::span<const double> x) const;

    /// Adds dLoss/dp into `dp` and returns dLoss/dx.
    std::vector<double> backward(std::span<const double> p, const std::vector<std::vector<double>>& acts,
                                 std::span<const double> dout, std::span<double> dp) const;

    /// Weights and biases uniform on +-1/sqrt(fan_in).
    void initialize(std::span<double> p, std::mt19937_64& rng) const;
};

/// Side of the feature map a 2x2 window at `stride` leaves on a side x side image.
int feature_side(int image_side, int stride);

} // namespace qnnbench::classical
