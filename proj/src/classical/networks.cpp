#include "qnnbench/classical/networks.hpp"

#include <stdexcept>

namespace qnnbench::classical {

namespace {

void check_count(std::size_t got, std::size_t want)
{
    if (got != want) {
        throw std::invalid_argument("parameter vector has " + std::to_string(got) + " entries, model needs " +
                                    std::to_string(want));
    }
}

} // namespace

DenseNet::DenseNet(std::vector<std::size_t> widths) : stack_{std::move(widths)}
{
    if (stack_.widths.size() < 2) {
        throw std::invalid_argument("an MLP needs at least input and output widths");
    }
    for (std::size_t w : stack_.widths) {
        if (w == 0) {
            throw std::invalid_argument("MLP layer widths must be positive");
        }
    }
    params_.assign(stack_.param_count(), 0.0);
}

void DenseNet::set_params(std::vector<double> params)
{
    check_count(params.size(), params_.size());
    params_ = std::move(params);
}

void DenseNet::initialize(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    stack_.initialize(params_, rng);
}

std::vector<double> DenseNet::forward(std::span<const double> x) const
{
    return stack_.forward(params_, x).back();
}

LossAndGrad DenseNet::example_loss_and_grad(std::span<const double> x, int label) const
{
    const auto acts = stack_.forward(params_, x);
    std::vector<double> dout;
    LossAndGrad out;
    out.loss = output_loss(acts.back(), label, &dout);
    out.gradient.assign(params_.size(), 0.0);
    stack_.backward(params_, acts, dout, out.gradient);
    return out;
}

ConvNet::ConvNet(int image_side, int channels, int stride, std::size_t hidden, std::size_t classes)
    : side_(image_side), channels_(channels), stride_(stride), map_side_(feature_side(image_side, stride))
{
    if (channels < 1) {
        throw std::invalid_argument("need at least one convolution channel");
    }
    head_.widths = {std::size_t(channels) * map_side_ * map_side_, hidden, classes};
    params_.assign(kConvParams * channels + head_.param_count(), 0.0);
}

void ConvNet::set_params(std::vector<double> params)
{
    check_count(params.size(), params_.size());
    params_ = std::move(params);
}

void ConvNet::initialize(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5); // fan-in 4
    for (std::size_t k = 0; k < kConvParams * channels_; ++k) {
        params_[k] = u(rng);
    }
    head_.initialize(std::span<double>(params_).subspan(kConvParams * channels_), rng);
}

void ConvNet::check_image(std::span<const double> x) const
{
    if (x.size() != input_size()) {
        throw std::invalid_argument("image has " + std::to_string(x.size()) + " pixels, expected " +
                                    std::to_string(input_size()));
    }
}

std::vector<double> ConvNet::feature_map(std::span<const double> x) const
{
    check_image(x);
    std::vector<double> maps;
    maps.reserve(head_.input_width());
    for (int c = 0; c < channels_; ++c) {
        const double* w = params_.data() + kConvParams * c;
        for (int i = 0; i < map_side_; ++i) {
            for (int j = 0; j < map_side_; ++j) {
                const int r = i * stride_, q = j * stride_;
                const double v = w[0] * x[r * side_ + q] + w[1] * x[r * side_ + q + 1] + w[2] * x[(r + 1) * side_ + q] +
                                 w[3] * x[(r + 1) * side_ + q + 1] + w[4];
                maps.push_back(v > 0.0 ? v : 0.0);
            }
        }
    }
    return maps;
}

std::vector<double> ConvNet::forward(std::span<const double> x) const
{
    const auto head_params = std::span<const double>(params_).subspan(kConvParams * channels_);
    return head_.forward(head_params, feature_map(x)).back();
}

LossAndGrad ConvNet::example_loss_and_grad(std::span<const double> x, int label) const
{
    const auto maps = feature_map(x);
    const std::size_t conv = kConvParams * channels_;
    const auto acts = head_.forward(std::span<const double>(params_).subspan(conv), maps);
    std::vector<double> dout;
    LossAndGrad out;
    out.loss = output_loss(acts.back(), label, &dout);
    out.gradient.assign(params_.size(), 0.0);
    const auto dmaps =
        head_.backward(std::span<const double>(params_).subspan(conv), acts, dout, std::span<double>(out.gradient).subspan(conv));
    std::size_t f = 0;
    for (int c = 0; c < channels_; ++c) {
        double* dw = out.gradient.data() + kConvParams * c;
        for (int i = 0; i < map_side_; ++i) {
            for (int j = 0; j < map_side_; ++j, ++f) {
                if (maps[f] <= 0.0) {
                    continue;
                }
                const int r = i * stride_, q = j * stride_;
                const double g = dmaps[f];
                dw[0] += g * x[r * side_ + q];
                dw[1] += g * x[r * side_ + q + 1];
                dw[2] += g * x[(r + 1) * side_ + q];
                dw[3] += g * x[(r + 1) * side_ + q + 1];
                dw[4] += g;
            }
        }
    }
    return out;
}

} // namespace qnnbench::classical
