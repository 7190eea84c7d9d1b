#include "qnnbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qnnbench {

Eigen::MatrixXd Model::example_metric(std::span<const double>) const
{
    throw std::logic_error(name() + " has no quantum metric; SQNGD needs a quantum model");
}

int predict_class(std::span<const double> outputs)
{
    if (outputs.size() == 1) {
        return outputs[0] > 0.0 ? 1 : 0;
    }
    return static_cast<int>(std::max_element(outputs.begin(), outputs.end()) - outputs.begin());
}

double output_loss(std::span<const double> outputs, int label, std::vector<double>* grad_out)
{
    if (outputs.size() == 1) {
        const double diff = outputs[0] - binary_target(label);
        if (grad_out) {
            grad_out->assign(1, 2.0 * diff);
        }
        return diff * diff;
    }
    if (label < 0 || static_cast<std::size_t>(label) >= outputs.size()) {
        throw std::invalid_argument("label " + std::to_string(label) + " outside the model's " +
                                    std::to_string(outputs.size()) + " classes");
    }
    const double top = *std::max_element(outputs.begin(), outputs.end());
    double z = 0.0;
    for (double o : outputs) {
        z += std::exp(o - top);
    }
    const double log_z = top + std::log(z);
    if (grad_out) {
        grad_out->resize(outputs.size());
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            (*grad_out)[k] = std::exp(outputs[k] - log_z) - (static_cast<int>(k) == label ? 1.0 : 0.0);
        }
    }
    return log_z - outputs[label];
}

LossAndGrad loss_and_grad(const Model& model, const data::Dataset& ds, std::span<const std::size_t> batch)
{
    if (batch.empty()) {
        throw std::invalid_argument("loss_and_grad needs a non-empty batch");
    }
    LossAndGrad total;
    total.gradient.assign(model.n_params(), 0.0);
    for (std::size_t i : batch) {
        const LossAndGrad e = model.example_loss_and_grad(ds.row(i), ds.labels[i]);
        total.loss += e.loss;
        for (std::size_t k = 0; k < e.gradient.size(); ++k) {
            total.gradient[k] += e.gradient[k];
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    total.loss *= inv;
    for (double& g : total.gradient) {
        g *= inv;
    }
    return total;
}

Eigen::MatrixXd batch_metric(const Model& model, const data::Dataset& ds, std::span<const std::size_t> batch)
{
    if (batch.empty()) {
        throw std::invalid_argument("batch_metric needs a non-empty batch");
    }
    const auto n = static_cast<Eigen::Index>(model.n_params());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i : batch) {
        sum += model.example_metric(ds.row(i));
    }
    return sum / static_cast<double>(batch.size());
}

Evaluation evaluate(const Model& model, const data::Dataset& ds, std::span<const std::size_t> indices,
                    std::span<const int> labels)
{
    Evaluation ev;
    if (indices.empty()) {
        return ev;
    }
    std::size_t correct = 0;
    for (std::size_t i : indices) {
        const auto out = model.forward(ds.row(i));
        correct += predict_class(out) == labels[i];
        ev.loss += output_loss(out, labels[i]);
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(indices.size());
    ev.loss /= static_cast<double>(indices.size());
    return ev;
}

} // namespace qnnbench
