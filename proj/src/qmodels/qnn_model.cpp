#include "qnnbench/qmodels/qnn_model.hpp"

#include <random>
#include <stdexcept>

#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/common.hpp"
#include "qnnbench/grad/metric.hpp"

namespace qnnbench::qmodels {

std::string gradient_method_name(GradientMethod m)
{
    return m == GradientMethod::Shift ? "shift" : "adjoint";
}

GradientMethod parse_gradient_method(const std::string& name)
{
    if (name == "shift") {
        return GradientMethod::Shift;
    }
    if (name == "adjoint") {
        return GradientMethod::Adjoint;
    }
    throw std::invalid_argument("unknown gradient method '" + name + "' (expected shift or adjoint)");
}

CircuitReadout::CircuitReadout(circuit::ParameterizedCircuit circuit, sim::Observable readout, double noise_p,
                               GradientMethod method, grad::ShiftRuleConfig shift)
    : circuit_(std::move(circuit)), readout_(std::move(readout)), noise_{noise_p, circuit_.layer_count()},
      trace_(readout_.trace(circuit_.n_qubits())), method_(method), shift_(shift)
{
    sim::validate(noise_);
    grad::validate(shift_);
    if (readout_.max_qubit() >= circuit_.n_qubits()) {
        throw std::invalid_argument("readout references a qubit outside the circuit");
    }
}

double CircuitReadout::value(std::span<const double> x, std::span<const double> theta) const
{
    const double clean = sim::expectation(circuit::bind_and_run(circuit_, x, theta), readout_);
    return sim::apply_depolarizing(clean, trace_, circuit_.n_qubits(), noise_);
}

grad::ValueAndGradient CircuitReadout::value_and_gradient(std::span<const double> x, std::span<const double> theta) const
{
    grad::ValueAndGradient out;
    if (method_ == GradientMethod::Adjoint) {
        out = grad::adjoint_gradient(circuit_, x, theta, readout_);
    } else {
        out.value = sim::expectation(circuit::bind_and_run(circuit_, x, theta), readout_);
        out.gradient = grad::shift_gradient(circuit_, x, theta, readout_, shift_);
    }
    // The noise map is affine in the clean expectation with slope (1-p)^L.
    out.value = sim::apply_depolarizing(out.value, trace_, circuit_.n_qubits(), noise_);
    if (!noise_.is_noiseless()) {
        const double r = sim::signal_retention(noise_);
        for (double& g : out.gradient) {
            g *= r;
        }
    }
    return out;
}

QnnModel::QnnModel(std::string name, circuit::ParameterizedCircuit circuit, sim::Observable readout, double noise_p,
                   GradientMethod method, grad::ShiftRuleConfig shift)
    : name_(std::move(name)), readout_(std::move(circuit), std::move(readout), noise_p, method, shift),
      theta_(readout_.circuit().n_params(), 0.0)
{
}

void QnnModel::set_params(std::vector<double> params)
{
    if (params.size() != theta_.size()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(params.size()) + " entries, circuit has " +
                                    std::to_string(theta_.size()));
    }
    theta_ = std::move(params);
}

void QnnModel::initialize(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (double& t : theta_) {
        t = u(rng);
    }
}

std::vector<double> QnnModel::forward(std::span<const double> x) const
{
    return {readout_.value(x, theta_)};
}

LossAndGrad QnnModel::example_loss_and_grad(std::span<const double> x, int label) const
{
    auto vg = readout_.value_and_gradient(x, theta_);
    std::vector<double> dout;
    LossAndGrad out;
    out.loss = output_loss(std::vector<double>{vg.value}, label, &dout);
    for (double& g : vg.gradient) {
        g *= dout[0];
    }
    out.gradient = std::move(vg.gradient);
    return out;
}

Eigen::MatrixXd QnnModel::example_metric(std::span<const double> x) const
{
    return grad::quantum_geometric_tensor(readout_.circuit(), x, theta_).g;
}

QcnnModel::QcnnModel(int image_side, int channels, int stride, double noise_p, GradientMethod method,
                     std::size_t hidden, std::size_t classes)
    : side_(image_side), channels_(channels), stride_(stride), map_side_(classical::feature_side(image_side, stride)),
      kernel_(circuit::build_qcnn_kernel(), sim::Observable::pauli_z(0), noise_p, method),
      kernel_params_(static_cast<std::size_t>(kernel_.circuit().n_params()))
{
    if (channels < 1) {
        throw std::invalid_argument("need at least one quantum convolution channel");
    }
    head_.widths = {std::size_t(channels) * map_side_ * map_side_, hidden, classes};
    params_.assign(kernel_params_ * channels + head_.param_count(), 0.0);
}

void QcnnModel::set_params(std::vector<double> params)
{
    if (params.size() != params_.size()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(params.size()) + " entries, model needs " +
                                    std::to_string(params_.size()));
    }
    params_ = std::move(params);
}

void QcnnModel::initialize(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    const std::size_t k = kernel_params_ * channels_;
    for (std::size_t i = 0; i < k; ++i) {
        params_[i] = u(rng);
    }
    head_.initialize(std::span<double>(params_).subspan(k), rng);
}

void QcnnModel::check_image(std::span<const double> x) const
{
    if (x.size() != input_size()) {
        throw std::invalid_argument("image has " + std::to_string(x.size()) + " pixels, expected " +
                                    std::to_string(input_size()));
    }
}

std::array<double, 4> QcnnModel::patch(std::span<const double> x, int i, int j) const
{
    const int r = i * stride_, c = j * stride_;
    return {x[r * side_ + c], x[r * side_ + c + 1], x[(r + 1) * side_ + c], x[(r + 1) * side_ + c + 1]};
}

std::vector<double> QcnnModel::feature_map(std::span<const double> x) const
{
    check_image(x);
    std::vector<double> maps;
    maps.reserve(head_.input_width());
    for (int ch = 0; ch < channels_; ++ch) {
        const auto theta = std::span<const double>(params_).subspan(kernel_params_ * ch, kernel_params_);
        for (int i = 0; i < map_side_; ++i) {
            for (int j = 0; j < map_side_; ++j) {
                maps.push_back(kernel_.value(patch(x, i, j), theta));
            }
        }
    }
    return maps;
}

std::vector<double> QcnnModel::forward(std::span<const double> x) const
{
    const auto head_params = std::span<const double>(params_).subspan(kernel_params_ * channels_);
    return head_.forward(head_params, feature_map(x)).back();
}

LossAndGrad QcnnModel::example_loss_and_grad(std::span<const double> x, int label) const
{
    check_image(x);
    const std::size_t k = kernel_params_ * channels_;
    std::vector<double> maps;
    std::vector<std::vector<double>> map_grads; // d feature / d kernel theta
    maps.reserve(head_.input_width());
    map_grads.reserve(head_.input_width());
    for (int ch = 0; ch < channels_; ++ch) {
        const auto theta = std::span<const double>(params_).subspan(kernel_params_ * ch, kernel_params_);
        for (int i = 0; i < map_side_; ++i) {
            for (int j = 0; j < map_side_; ++j) {
                auto vg = kernel_.value_and_gradient(patch(x, i, j), theta);
                maps.push_back(vg.value);
                map_grads.push_back(std::move(vg.gradient));
            }
        }
    }
    const auto head_params = std::span<const double>(params_).subspan(k);
    const auto acts = head_.forward(head_params, maps);
    std::vector<double> dout;
    LossAndGrad out;
    out.loss = output_loss(acts.back(), label, &dout);
    out.gradient.assign(params_.size(), 0.0);
    const auto dmaps = head_.backward(head_params, acts, dout, std::span<double>(out.gradient).subspan(k));
    const std::size_t per_channel = std::size_t(map_side_) * map_side_;
    for (std::size_t f = 0; f < maps.size(); ++f) {
        double* g = out.gradient.data() + kernel_params_ * (f / per_channel);
        for (std::size_t p = 0; p < kernel_params_; ++p) {
            g[p] += dmaps[f] * map_grads[f][p];
        }
    }
    return out;
}

} // namespace qnnbench::qmodels
