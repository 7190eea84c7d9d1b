#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/classical/networks.hpp"
#include "qnnbench/grad/metric.hpp"
#include "qnnbench/qmodels/qnn_model.hpp"

using namespace qnnbench;
using qmodels::GradientMethod;

namespace {

// Finite-difference check of a model's per-example loss gradient.
void check_model_gradient(Model& model, std::span<const double> x, int label, double rel, double abs,
                          double step = 1e-5)
{
    const auto analytic = model.example_loss_and_grad(x, label);
    const auto base = model.params();
    const auto fd = testing::central_differences(
        [&](const std::vector<double>& p) {
            model.set_params(p);
            return output_loss(model.forward(x), label);
        },
        base, step);
    model.set_params(base);
    CHECK(analytic.loss == doctest::Approx(output_loss(model.forward(x), label)).epsilon(1e-12));
    for (std::size_t k = 0; k < fd.size(); ++k) {
        CHECK_MESSAGE(testing::gradient_close(analytic.gradient[k], fd[k], rel, abs), model.name(), " param ", k, ": ",
                      analytic.gradient[k], " vs ", fd[k]);
    }
}

data::Dataset tiny_dataset(std::size_t d, std::vector<std::vector<double>> rows, std::vector<int> labels, int classes)
{
    data::Dataset ds;
    ds.n_features = d;
    ds.n_classes = classes;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ds.features.insert(ds.features.end(), rows[i].begin(), rows[i].end());
        ds.train.push_back(i);
    }
    ds.labels = std::move(labels);
    return ds;
}

qmodels::QnnModel make_qnn(circuit::ParameterizedCircuit c, double p = 0.0, GradientMethod m = GradientMethod::Shift)
{
    return qmodels::QnnModel("qnn", std::move(c), sim::Observable::pauli_z(0), p, m);
}

} // namespace

TEST_CASE("prediction and loss conventions")
{
    CHECK(predict_class(std::vector<double>{0.2}) == 1);
    CHECK(predict_class(std::vector<double>{-0.2}) == 0);
    CHECK(predict_class(std::vector<double>{0.0}) == 0);
    CHECK(predict_class(std::vector<double>{1.0, 3.0, 3.0}) == 1);
    CHECK(output_loss(std::vector<double>{1.0}, 1) == 0.0);
    CHECK(output_loss(std::vector<double>{0.5}, 0) == doctest::Approx(2.25));
    CHECK(output_loss(std::vector<double>{0.0, 0.0}, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    std::vector<double> g;
    output_loss(std::vector<double>{1.0, 2.0, 0.5}, 2, &g);
    CHECK(g[0] + g[1] + g[2] == doctest::Approx(0.0).scale(1.0));
    CHECK(g[2] < 0.0);
    CHECK_THROWS_AS(output_loss(std::vector<double>{0.0, 0.0}, 2), std::invalid_argument);
}

TEST_CASE("dense network")
{
    classical::DenseNet wine({13, 7, 2});
    CHECK(wine.n_params() == 114);
    CHECK(classical::DenseNet({16, 7, 2}).n_params() == 135);

    // zero weights: uniform softmax on a balanced batch
    const auto ds = tiny_dataset(13, {std::vector<double>(13, 0.3), std::vector<double>(13, 1.1)}, {0, 1}, 2);
    const std::vector<std::size_t> batch{0, 1};
    CHECK(loss_and_grad(wine, ds, batch).loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(loss_and_grad(wine, ds, std::vector<std::size_t>{}), std::invalid_argument);
    CHECK_THROWS_AS(wine.forward(std::vector<double>(12, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(wine.set_params(std::vector<double>(3, 0.0)), std::invalid_argument);

    std::mt19937_64 rng(5);
    const std::vector<std::vector<std::size_t>> shapes{{4, 6, 3}, {5, 1}, {3, 8, 8, 2}, {6, 5, 4, 3, 10}, {2, 9, 1}};
    for (const auto& widths : shapes) {
        classical::DenseNet net(widths);
        net.initialize(rng());
        const auto x = testing::uniform_vector(rng, widths.front(), 0.0, kPi);
        const int label = static_cast<int>(rng() % std::max<std::size_t>(2, widths.back()));
        check_model_gradient(net, x, label, 1e-6, 1e-8);
    }
}

TEST_CASE("dense initialization is seeded and bounded")
{
    classical::DenseNet a({16, 32, 2}), b({16, 32, 2});
    a.initialize(7);
    b.initialize(7);
    CHECK(a.params() == b.params());
    for (std::size_t k = 0; k < 16 * 32 + 32; ++k) {
        CHECK(std::abs(a.params()[k]) <= 0.25);
    }
    b.initialize(8);
    CHECK(a.params() != b.params());
}

TEST_CASE("convolutional network")
{
    classical::ConvNet cnn(10, 4, 2);
    CHECK(cnn.map_side() == 5);
    CHECK(cnn.forward(std::vector<double>(100, 0.5)).size() == 10);
    CHECK(cnn.n_params() == 4 * 5 + (100 * 32 + 32) + (32 * 10 + 10));

    std::vector<double> p(cnn.n_params(), 0.0);
    p[0] = 1.0; // channel 0 picks the top-left pixel of each patch
    cnn.set_params(p);
    const auto maps = cnn.feature_map(std::vector<double>(100, 0.8));
    for (std::size_t f = 0; f < 25; ++f) {
        CHECK(maps[f] == 0.8);
    }
    CHECK_THROWS_AS(cnn.forward(std::vector<double>(99, 0.0)), std::invalid_argument);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 3; ++trial) {
        classical::ConvNet net(6, 2, 2, 8, 10);
        net.initialize(rng());
        const auto x = testing::uniform_vector(rng, 36, 0.0, kPi);
        check_model_gradient(net, x, static_cast<int>(rng() % 10), 1e-6, 1e-8);
    }
}

TEST_CASE("QNN forward examples")
{
    auto qnnn = make_qnn(circuit::build_qnnn(4, 3));
    CHECK(qnnn.forward(std::vector<double>(4, 0.0))[0] == doctest::Approx(1.0).epsilon(1e-14));

    auto noisy = make_qnn(circuit::build_qnnn(4, 3), 1.0);
    std::mt19937_64 rng(3);
    noisy.initialize(4);
    for (int i = 0; i < 5; ++i) {
        CHECK(noisy.forward(testing::uniform_vector(rng, 4, 0.0, kPi))[0] == 0.0);
    }

    // perfectly scored batch: loss and gradient vanish
    const auto ds = tiny_dataset(4, {std::vector<double>(4, 0.0)}, {1}, 2);
    const auto lg = loss_and_grad(qnnn, ds, std::vector<std::size_t>{0});
    CHECK(lg.loss == doctest::Approx(0.0).scale(1.0));
    for (double g : lg.gradient) {
        CHECK(std::abs(g) < 1e-12);
    }
    CHECK_THROWS_AS(qnnn.forward(std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("QNN scores are bounded and shrink with noise")
{
    std::mt19937_64 rng(17);
    for (auto c : {circuit::build_qnnn(5, 2), circuit::build_qenn(5, 2)}) {
        auto clean = make_qnn(c);
        clean.initialize(rng());
        for (int i = 0; i < 10; ++i) {
            const auto x = testing::uniform_vector(rng, 5, 0.0, kPi);
            double previous = std::abs(clean.forward(x)[0]);
            CHECK(previous <= 1.0);
            for (double p : {0.01, 0.05, 0.1, 0.3, 1.0}) {
                auto noisy = make_qnn(c, p);
                noisy.set_params(clean.params());
                const double s = std::abs(noisy.forward(x)[0]);
                CHECK(s <= previous);
                previous = s;
            }
        }
    }
}

TEST_CASE("QNN loss gradient matches finite differences")
{
    std::mt19937_64 rng(19);
    for (auto method : {GradientMethod::Shift, GradientMethod::Adjoint}) {
        for (double p : {0.0, 0.05}) {
            for (auto c : {circuit::build_qnnn(4, 2), circuit::build_qenn(4, 2)}) {
                auto model = make_qnn(c, p, method);
                model.initialize(rng());
                const auto x = testing::uniform_vector(rng, 4, 0.0, kPi);
                check_model_gradient(model, x, static_cast<int>(rng() % 2), 1e-5, 1e-7, 1e-4);
            }
        }
    }
}

TEST_CASE("QNN metric is the circuit metric, averaged over a batch")
{
    auto model = make_qnn(circuit::build_qenn(3, 1));
    model.initialize(2);
    const auto ds = tiny_dataset(3, {{0.1, 0.2, 0.3}, {1.0, 2.0, 0.5}}, {0, 1}, 2);
    const Eigen::MatrixXd m = batch_metric(model, ds, std::vector<std::size_t>{0, 1});
    const Eigen::MatrixXd a = grad::quantum_geometric_tensor(model.readout().circuit(), ds.row(0), model.params()).g;
    const Eigen::MatrixXd b = grad::quantum_geometric_tensor(model.readout().circuit(), ds.row(1), model.params()).g;
    CHECK((m - 0.5 * (a + b)).cwiseAbs().maxCoeff() < 1e-15);

    classical::DenseNet net({3, 2});
    CHECK_FALSE(net.has_metric());
    CHECK_THROWS_AS(batch_metric(net, ds, std::vector<std::size_t>{0}), std::logic_error);
}

TEST_CASE("QCNN shapes and examples")
{
    qmodels::QcnnModel qcnn(10, 4, 2);
    CHECK(qcnn.map_side() == 5);
    CHECK(qcnn.feature_map(std::vector<double>(100, 0.3)).size() == 100);
    CHECK(qcnn.forward(std::vector<double>(100, 0.3)).size() == 10);
    classical::ConvNet cnn(10, 4, 2);
    CHECK(cnn.map_side() == qcnn.map_side());
    CHECK(qcnn.n_params() == 4 * 6 + (100 * 32 + 32) + (32 * 10 + 10));

    // kernel angles all zero (parameters default to zero): every feature is 1
    for (double f : qcnn.feature_map(std::vector<double>(100, 0.0))) {
        CHECK(f == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(qcnn.forward(std::vector<double>(64, 0.0)), std::invalid_argument);
}

TEST_CASE("QCNN hybrid gradient matches finite differences")
{
    std::mt19937_64 rng(23);
    for (auto method : {GradientMethod::Shift, GradientMethod::Adjoint}) {
        qmodels::QcnnModel model(4, 2, 2, 0.0, method, 6, 10);
        model.initialize(rng());
        const auto x = testing::uniform_vector(rng, 16, 0.0, kPi);
        check_model_gradient(model, x, static_cast<int>(rng() % 10), 1e-4, 1e-7, 1e-5);
    }
    qmodels::QcnnModel noisy(4, 1, 1, 0.1, GradientMethod::Adjoint, 5, 10);
    noisy.initialize(4);
    check_model_gradient(noisy, testing::uniform_vector(rng, 16, 0.0, kPi), 3, 1e-4, 1e-7, 1e-5);
}
