#include "qnnbench/optim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qnnbench/common.hpp"

namespace qnnbench::optim {

namespace {

void check_sizes(std::span<const double> theta, std::span<const double> grad)
{
    if (theta.size() != grad.size()) {
        throw std::invalid_argument("gradient has " + std::to_string(grad.size()) + " entries, parameters have " +
                                    std::to_string(theta.size()));
    }
}

} // namespace

std::string optimizer_name(OptimizerKind kind)
{
    switch (kind) {
    case OptimizerKind::GD:
        return "gd";
    case OptimizerKind::SGD:
        return "sgd";
    case OptimizerKind::SQNGD:
        return "sqngd";
    case OptimizerKind::Adam:
        return "adam";
    }
    return "?";
}

OptimizerKind parse_optimizer(const std::string& name)
{
    for (auto k : {OptimizerKind::GD, OptimizerKind::SGD, OptimizerKind::SQNGD, OptimizerKind::Adam}) {
        if (optimizer_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown optimizer '" + name + "' (expected gd, sgd, sqngd or adam)");
}

void validate(const OptimizerState& s)
{
    if (!(s.learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (s.batch_size < 1) {
        throw std::invalid_argument("batch size must be at least 1");
    }
    if (!(s.weight_decay >= 0.0)) {
        throw std::invalid_argument("weight decay must be non-negative");
    }
    if (!(s.pinv_cutoff > 0.0)) {
        throw std::invalid_argument("pseudo-inverse cutoff must be positive");
    }
    if (!(s.beta1 >= 0.0 && s.beta1 < 1.0 && s.beta2 >= 0.0 && s.beta2 < 1.0) || !(s.epsilon > 0.0)) {
        throw std::invalid_argument("Adam needs beta1, beta2 in [0, 1) and epsilon > 0");
    }
}

std::vector<double> regularized_gradient(std::span<const double> theta, std::span<const double> grad,
                                         double weight_decay)
{
    check_sizes(theta, grad);
    std::vector<double> g(grad.begin(), grad.end());
    for (double e : g) {
        if (!std::isfinite(e)) {
            throw NumericalError("non-finite gradient entry; step rejected");
        }
    }
    if (weight_decay != 0.0) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] += 2.0 * weight_decay * theta[i];
        }
    }
    return g;
}

std::vector<double> step_gd(std::span<const double> theta, std::span<const double> grad, const OptimizerState& state)
{
    const auto g = regularized_gradient(theta, grad, state.weight_decay);
    std::vector<double> out(theta.begin(), theta.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] -= state.learning_rate * g[i];
    }
    return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double cutoff)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("pseudo-inverse needs a square matrix");
    }
    if (!a.allFinite()) {
        throw NumericalError("non-finite metric entry");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalError("metric eigendecomposition failed");
    }
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const double top = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (std::abs(lambda(i)) > cutoff * top) {
            inv(i) = 1.0 / lambda(i);
        }
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<double> step_sqngd(std::span<const double> theta, std::span<const double> grad,
                               const Eigen::MatrixXd& metric, const OptimizerState& state)
{
    const auto n = static_cast<Eigen::Index>(theta.size());
    if (metric.rows() != n || metric.cols() != n) {
        throw std::invalid_argument("metric is " + std::to_string(metric.rows()) + "x" + std::to_string(metric.cols()) +
                                    ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    const auto g = regularized_gradient(theta, grad, state.weight_decay);
    const Eigen::VectorXd direction =
        pseudo_inverse(metric, state.pinv_cutoff) * Eigen::Map<const Eigen::VectorXd>(g.data(), n);
    std::vector<double> out(theta.begin(), theta.end());
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] -= state.learning_rate * direction(i);
    }
    return out;
}

std::vector<double> step_adam(std::span<const double> theta, std::span<const double> grad, OptimizerState& state)
{
    const auto g = regularized_gradient(theta, grad, state.weight_decay);
    if (state.m.size() != g.size()) {
        state.m.assign(g.size(), 0.0);
        state.v.assign(g.size(), 0.0);
        state.steps = 0;
    }
    ++state.steps;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.steps));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.steps));
    std::vector<double> out(theta.begin(), theta.end());
    for (std::size_t i = 0; i < g.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g[i] * g[i];
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        out[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    return out;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t n, int batch_size, std::uint64_t seed)
{
    if (batch_size <= 0) {
        throw std::invalid_argument("batch size must be positive");
    }
    if (static_cast<std::size_t>(batch_size) > n) {
        throw std::invalid_argument("batch size " + std::to_string(batch_size) + " exceeds the " + std::to_string(n) +
                                    " available examples");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Explicit Fisher-Yates so the permutation does not depend on the
    // standard library's shuffle or distribution implementations.
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<std::vector<std::size_t>> batches;
    const auto bs = static_cast<std::size_t>(batch_size);
    for (std::size_t start = 0; start < n; start += bs) {
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + bs)));
    }
    return batches;
}

} // namespace qnnbench::optim
