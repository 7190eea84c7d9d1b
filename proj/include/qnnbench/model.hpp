#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnnbench/data/dataset.hpp"

namespace qnnbench {

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> gradient;
};

/// Shared contract of the quantum and classical classifiers. A model with a
/// single output is a binary classifier scored by sign and trained on
/// squared error against +-1 targets; wider outputs are logits under
/// softmax cross-entropy.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string name() const = 0;
    virtual std::size_t input_size() const = 0;
    virtual std::size_t output_size() const = 0;

    virtual const std::vector<double>& params() const = 0;
    virtual void set_params(std::vector<double> params) = 0;
    std::size_t n_params() const { return params().size(); }

    /// Seeded parameter initialization.
    virtual void initialize(std::uint64_t seed) = 0;

    virtual std::vector<double> forward(std::span<const double> x) const = 0;
    virtual LossAndGrad example_loss_and_grad(std::span<const double> x, int label) const = 0;

    /// Fubini-Study metric of the model's state at x, for quantum models.
    virtual bool has_metric() const { return false; }
    virtual Eigen::MatrixXd example_metric(std::span<const double> x) const;
};

/// Binary target for squared error: class 1 -> +1, class 0 -> -1.
inline double binary_target(int label) { return label == 1 ? 1.0 : -1.0; }

/// sign(score) for one output (0 counts as class 0), argmax otherwise, ties
/// to the lower class index.
int predict_class(std::span<const double> outputs);

/// Per-example loss of raw outputs; `grad_out` (if non-null) receives dLoss/doutputs.
double output_loss(std::span<const double> outputs, int label, std::vector<double>* grad_out = nullptr);

/// Batch means of example_loss_and_grad. Throws std::invalid_argument on an empty batch.
LossAndGrad loss_and_grad(const Model& model, const data::Dataset& ds, std::span<const std::size_t> batch);

/// Elementwise mean of example metrics over the batch.
Eigen::MatrixXd batch_metric(const Model& model, const data::Dataset& ds, std::span<const std::size_t> batch);

struct Evaluation {
    double accuracy = 0.0;
    double loss = 0.0;
};
Evaluation evaluate(const Model& model, const data::Dataset& ds, std::span<const std::size_t> indices,
                    std::span<const int> labels);

} // namespace qnnbench
