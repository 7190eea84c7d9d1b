#pragma once

#include "qnnbench/classical/layers.hpp"
#include "qnnbench/model.hpp"

namespace qnnbench::classical {

/// Multi-layer perceptron; widths include input and output.
class DenseNet : public Model {
public:
    explicit DenseNet(std::vector<std::size_t> widths);

    std::string name() const override { return "mlp"; }
    std::size_t input_size() const override { return stack_.input_width(); }
    std::size_t output_size() const override { return stack_.output_width(); }
    const std::vector<double>& params() const override { return params_; }
    void set_params(std::vector<double> params) override;
    void initialize(std::uint64_t seed) override;

    std::vector<double> forward(std::span<const double> x) const override;
    LossAndGrad example_loss_and_grad(std::span<const double> x, int label) const override;

    const DenseStack& stack() const { return stack_; }

private:
    DenseStack stack_;
    std::vector<double> params_;
};

/// Classical 2x2 convolution (per channel: 4 weights, 1 bias, ReLU) followed
/// by the same dense head as the quantum convolutional model.
class ConvNet : public Model {
public:
    ConvNet(int image_side, int channels, int stride, std::size_t hidden = 32, std::size_t classes = 10);

    std::string name() const override { return "cnn"; }
    std::size_t input_size() const override { return std::size_t(side_) * side_; }
    std::size_t output_size() const override { return head_.output_width(); }
    const std::vector<double>& params() const override { return params_; }
    void set_params(std::vector<double> params) override;
    void initialize(std::uint64_t seed) override;

    std::vector<double> forward(std::span<const double> x) const override;
    LossAndGrad example_loss_and_grad(std::span<const double> x, int label) const override;

    /// Channel-major feature maps after the ReLU.
    std::vector<double> feature_map(std::span<const double> image) const;
    int map_side() const { return map_side_; }

private:
    static constexpr std::size_t kConvParams = 5;

    void check_image(std::span<const double> x) const;

    int side_, channels_, stride_, map_side_;
    DenseStack head_;
    std::vector<double> params_;
};

} // namespace qnnbench::classical
