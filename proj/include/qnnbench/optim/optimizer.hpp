#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qnnbench::optim {

enum class OptimizerKind { GD, SGD, SQNGD, Adam };

std::string optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(const std::string& name);

/// Hyper-parameters plus the mutable Adam moments. Owned by one training loop.
struct OptimizerState {
    OptimizerKind kind = OptimizerKind::SGD;
    double learning_rate = 0.01;
    int batch_size = 1;
    double weight_decay = 0.0;
    double pinv_cutoff = 1e-8;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    std::vector<double> m;
    std::vector<double> v;
    long long steps = 0;
};

/// Throws std::invalid_argument on a non-positive rate, batch size or cutoff,
/// negative decay, or Adam betas outside [0, 1).
void validate(const OptimizerState& state);

/// grad + 2 lambda theta (the gradient of lambda ||theta||^2 added), or grad
/// itself when lambda is 0. Throws NumericalError on non-finite entries.
std::vector<double> regularized_gradient(std::span<const double> theta, std::span<const double> grad,
                                         double weight_decay);

/// theta - eta (grad + 2 lambda theta).
std::vector<double> step_gd(std::span<const double> theta, std::span<const double> grad, const OptimizerState& state);

/// theta - eta g+ (grad + 2 lambda theta), with g+ the pseudo-inverse of the
/// metric.
std::vector<double> step_sqngd(std::span<const double> theta, std::span<const double> grad,
                               const Eigen::MatrixXd& metric, const OptimizerState& state);

/// Bias-corrected Adam; updates the moments in `state`.
std::vector<double> step_adam(std::span<const double> theta, std::span<const double> grad, OptimizerState& state);

/// Pseudo-inverse of a symmetric matrix through its eigendecomposition;
/// eigenvalues with |lambda| <= cutoff * max |lambda| are dropped.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& symmetric, double cutoff);

/// Seeded permutation of 0..n-1 cut into ceil(n / batch_size) batches; the
/// last batch holds the remainder.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, int batch_size, std::uint64_t seed);

} // namespace qnnbench::optim
