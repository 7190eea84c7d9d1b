#pragma once

#include <array>

#include "qnnbench/circuit/circuit.hpp"
#include "qnnbench/classical/layers.hpp"
#include "qnnbench/grad/gradients.hpp"
#include "qnnbench/model.hpp"
#include "qnnbench/sim/noise.hpp"
#include "qnnbench/sim/observable.hpp"

namespace qnnbench::qmodels {

enum class GradientMethod { Shift, Adjoint };

std::string gradient_method_name(GradientMethod m);
GradientMethod parse_gradient_method(const std::string& name);

/// Expectation of a readout observable plus its parameter gradient, with
/// depolarizing noise applied per trainable layer.
class CircuitReadout {
public:
    CircuitReadout(circuit::ParameterizedCircuit circuit, sim::Observable readout, double noise_p,
                   GradientMethod method, grad::ShiftRuleConfig shift = {});

    const circuit::ParameterizedCircuit& circuit() const { return circuit_; }
    const sim::NoiseSpec& noise() const { return noise_; }

    double value(std::span<const double> x, std::span<const double> theta) const;
    grad::ValueAndGradient value_and_gradient(std::span<const double> x, std::span<const double> theta) const;

private:
    circuit::ParameterizedCircuit circuit_;
    sim::Observable readout_;
    sim::NoiseSpec noise_;
    double trace_;
    GradientMethod method_;
    grad::ShiftRuleConfig shift_;
};

/// Binary QNN classifier: one score, the (noisy) expectation of the readout,
/// predicted class sign(score).
class QnnModel : public Model {
public:
    QnnModel(std::string name, circuit::ParameterizedCircuit circuit, sim::Observable readout, double noise_p = 0.0,
             GradientMethod method = GradientMethod::Shift, grad::ShiftRuleConfig shift = {});

    std::string name() const override { return name_; }
    std::size_t input_size() const override { return readout_.circuit().n_features(); }
    std::size_t output_size() const override { return 1; }
    const std::vector<double>& params() const override { return theta_; }
    void set_params(std::vector<double> params) override;
    /// Angles uniform on [0, 2 pi).
    void initialize(std::uint64_t seed) override;

    std::vector<double> forward(std::span<const double> x) const override;
    LossAndGrad example_loss_and_grad(std::span<const double> x, int label) const override;

    bool has_metric() const override { return true; }
    Eigen::MatrixXd example_metric(std::span<const double> x) const override;

    const CircuitReadout& readout() const { return readout_; }

private:
    std::string name_;
    CircuitReadout readout_;
    std::vector<double> theta_;
};

/// Quantum convolution: each channel runs the 4-qubit kernel on every 2x2
/// patch (pixels of the patch, row-major, bound to qubits 0..3) and records
/// <Z_0>. The stacked maps feed a dense head with a ReLU hidden layer.
/// Parameters: channel kernels (6 each), then the head.
class QcnnModel : public Model {
public:
    QcnnModel(int image_side, int channels, int stride, double noise_p = 0.0,
              GradientMethod method = GradientMethod::Adjoint, std::size_t hidden = 32, std::size_t classes = 10);

    std::string name() const override { return "qcnn"; }
    std::size_t input_size() const override { return std::size_t(side_) * side_; }
    std::size_t output_size() const override { return head_.output_width(); }
    const std::vector<double>& params() const override { return params_; }
    void set_params(std::vector<double> params) override;
    void initialize(std::uint64_t seed) override;

    std::vector<double> forward(std::span<const double> x) const override;
    LossAndGrad example_loss_and_grad(std::span<const double> x, int label) const override;

    std::vector<double> feature_map(std::span<const double> image) const;
    int map_side() const { return map_side_; }
    std::size_t kernel_params() const { return kernel_params_; }

private:
    std::array<double, 4> patch(std::span<const double> image, int i, int j) const;
    void check_image(std::span<const double> x) const;

    int side_, channels_, stride_, map_side_;
    CircuitReadout kernel_;
    std::size_t kernel_params_;
    classical::DenseStack head_;
    std::vector<double> params_;
};

} // namespace qnnbench::qmodels
