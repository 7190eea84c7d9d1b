#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "qnnbench/common.hpp"
#include "qnnbench/harness/config.hpp"
#include "qnnbench/harness/gradcheck.hpp"
#include "qnnbench/harness/train.hpp"

using namespace qnnbench;
using namespace qnnbench::harness;

namespace {

ExperimentConfig small_config(const std::string& arch = "qnnn")
{
    ExperimentConfig c;
    c.model.architecture = arch;
    c.model.layers = 2;
    c.model.gradient = "adjoint";
    c.model.hidden = {5};
    c.data.n_features = 4;
    c.data.n_per_class = 16;
    c.optimizer.kind = "sgd";
    c.optimizer.learning_rate = 0.05;
    c.optimizer.batch_size = 4;
    c.epochs = 3;
    c.repetitions = 3;
    c.seed = 7;
    return c;
}

void check_same_metrics(const TrainResult& a, const TrainResult& b)
{
    REQUIRE(a.repetitions.size() == b.repetitions.size());
    for (std::size_t r = 0; r < a.repetitions.size(); ++r) {
        const auto& x = a.repetitions[r].records;
        const auto& y = b.repetitions[r].records;
        REQUIRE(x.size() == y.size());
        for (std::size_t e = 0; e < x.size(); ++e) {
            CHECK(x[e].epoch == y[e].epoch);
            CHECK(x[e].train_accuracy == y[e].train_accuracy);
            CHECK(x[e].test_accuracy == y[e].test_accuracy);
            CHECK(x[e].train_loss == y[e].train_loss);
            CHECK(x[e].generalization_error == y[e].generalization_error);
            CHECK(x[e].gradient_norm == y[e].gradient_norm);
        }
        CHECK(a.repetitions[r].final_params == b.repetitions[r].final_params);
    }
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Drops the last (wall_ms) column of every line.
std::string without_wall_ms(const std::string& csv)
{
    std::string out, line;
    std::istringstream in(csv);
    while (std::getline(in, line)) {
        out += line.substr(0, line.rfind(',')) + '\n';
    }
    return out;
}

} // namespace

TEST_CASE("generalization error examples")
{
    CHECK(generalization_error(0.92, 0.91) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(generalization_error(0.90, 0.50) == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(generalization_error(0.7, 0.7) == 0.0);
}

TEST_CASE("identical configs give identical metrics, also across job counts")
{
    const auto cfg = small_config();
    const auto ds = load_dataset(cfg.data);
    const auto a = train(cfg, ds);
    const auto b = train(cfg, ds);
    const auto c = train(cfg, ds, {3});
    check_same_metrics(a, b);
    check_same_metrics(a, c);

    const auto dir = std::filesystem::temp_directory_path() / "qnnbench_test_determinism";
    std::filesystem::create_directories(dir);
    write_metrics_csv(dir / "a.csv", config_hash(cfg), a);
    write_metrics_csv(dir / "c.csv", config_hash(cfg), c);
    const auto text = read_file(dir / "a.csv");
    CHECK(text.rfind(std::string(kMetricsHeader) + "\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + cfg.repetitions * (cfg.epochs + 1));
    CHECK(without_wall_ms(text) == without_wall_ms(read_file(dir / "c.csv")));
    std::filesystem::remove_all(dir);
}

TEST_CASE("records are well formed")
{
    auto cfg = small_config();
    const auto result = train(cfg);
    REQUIRE(result.mean.size() == static_cast<std::size_t>(cfg.epochs + 1));
    for (const auto& rep : result.repetitions) {
        CHECK_FALSE(rep.failed);
        REQUIRE(rep.records.size() == static_cast<std::size_t>(cfg.epochs + 1));
        for (std::size_t e = 0; e < rep.records.size(); ++e) {
            const auto& r = rep.records[e];
            CHECK(r.epoch == static_cast<int>(e));
            CHECK(r.train_accuracy >= 0.0);
            CHECK(r.train_accuracy <= 1.0);
            CHECK(r.test_accuracy >= 0.0);
            CHECK(r.test_accuracy <= 1.0);
            CHECK(r.generalization_error == r.train_accuracy - r.test_accuracy);
            CHECK(r.gradient_norm >= 0.0);
        }
        CHECK(rep.records[0].wall_ms == 0.0);
    }
    double sum = 0.0;
    for (const auto& rep : result.repetitions) {
        sum += rep.records.back().test_accuracy;
    }
    CHECK(result.mean.back().test_accuracy == doctest::Approx(sum / cfg.repetitions).epsilon(1e-12));
}

TEST_CASE("zero epochs give only the initial evaluation")
{
    auto cfg = small_config();
    cfg.epochs = 0;
    const auto result = train(cfg);
    for (const auto& rep : result.repetitions) {
        REQUIRE(rep.records.size() == 1);
        CHECK(rep.records[0].epoch == 0);
    }
    REQUIRE(result.mean.size() == 1);
}

TEST_CASE("GD makes exactly one full-batch update per epoch")
{
    auto cfg = small_config("mlp");
    cfg.optimizer.kind = "gd";
    cfg.optimizer.learning_rate = 0.3;
    cfg.epochs = 1;
    cfg.repetitions = 1;
    const auto ds = load_dataset(cfg.data);
    const auto result = train(cfg, ds);

    auto model = make_model(cfg.model, ds);
    model->initialize(mix_seed(cfg.seed, 0, 1)); // the harness's init stream
    const auto lg = loss_and_grad(*model, ds, ds.train);
    auto expected = model->params();
    for (std::size_t j = 0; j < expected.size(); ++j) {
        expected[j] -= cfg.optimizer.learning_rate * lg.gradient[j];
    }
    const auto& got = result.repetitions[0].final_params;
    REQUIRE(got.size() == expected.size());
    for (std::size_t j = 0; j < got.size(); ++j) {
        CHECK(got[j] == doctest::Approx(expected[j]).epsilon(1e-12));
    }
    CHECK(make_optimizer(cfg.optimizer, ds.train.size()).batch_size == static_cast<int>(ds.train.size()));
}

TEST_CASE("weight decay of zero is bit-identical to no decay")
{
    auto plain = small_config();
    json doc = to_json(plain);
    doc["optimizer"].erase("weight_decay");
    const auto no_key = config_from_json(doc);
    doc["optimizer"]["weight_decay"] = 0.0;
    const auto zero = config_from_json(doc);
    check_same_metrics(train(no_key), train(zero));

    doc["optimizer"]["weight_decay"] = 0.05;
    const auto decayed = train(config_from_json(doc));
    CHECK(decayed.repetitions[0].final_params != train(zero).repetitions[0].final_params);
}

TEST_CASE("failed repetitions are excluded from the mean and counted")
{
    auto cfg = small_config("mlp");
    cfg.optimizer.learning_rate = 1e300;
    cfg.repetitions = 2;
    const auto result = train(cfg);
    CHECK(result.failed_count() == 2);
    CHECK(result.mean.empty());
    for (const auto& rep : result.repetitions) {
        CHECK_FALSE(rep.failure.empty());
    }
    const auto summary = summary_json(cfg, "id", result);
    CHECK(summary.dump().find("failed") != std::string::npos);
}

TEST_CASE("random labels touch only training labels")
{
    auto cfg = small_config("mlp");
    cfg.data.random_labels = 1.0;
    cfg.epochs = 0;
    cfg.repetitions = 1;
    const auto ds = load_dataset(cfg.data);
    const auto result = train(cfg, ds);
    auto model = make_model(cfg.model, ds);
    model->initialize(mix_seed(cfg.seed, 0, 1));
    const auto te = evaluate(*model, ds, ds.test, ds.labels);
    CHECK(result.repetitions[0].records[0].test_accuracy == te.accuracy);
}

TEST_CASE("single-value sweep equals train")
{
    auto cfg = small_config();
    cfg.repetitions = 2;
    const auto ds = load_dataset(cfg.data);
    const auto points = sweep(cfg, ds, SweepAxis::BatchSize, {static_cast<double>(cfg.optimizer.batch_size)});
    REQUIRE(points.size() == 1);
    check_same_metrics(points[0].result, train(cfg, ds));
    CHECK_THROWS_AS(sweep(cfg, ds, SweepAxis::NoiseP, {}), std::invalid_argument);

    const auto noise = sweep(cfg, ds, SweepAxis::NoiseP, {0.0, 0.5});
    REQUIRE(noise.size() == 2);
    check_same_metrics(noise[0].result, train(cfg, ds));
    CHECK(parse_sweep_axis("layers") == SweepAxis::Layers);
    CHECK_THROWS_AS(parse_sweep_axis("depth"), std::invalid_argument);
}

TEST_CASE("config JSON round trip, hashing and overrides")
{
    const auto cfg = small_config("qenn");
    const auto back = config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(config_hash(cfg).size() == 16);

    const auto a = json::parse(R"({"epochs": 5, "model": {"architecture": "qenn", "layers": 2}})");
    const auto b = json::parse(R"({"model": {"layers": 2, "architecture": "qenn"}, "epochs": 5})");
    CHECK(config_hash(config_from_json(a)) == config_hash(config_from_json(b)));
    auto c = a;
    c["epochs"] = 6;
    CHECK(config_hash(config_from_json(c)) != config_hash(config_from_json(a)));

    json doc = to_json(cfg);
    apply_override(doc, "optimizer.batch_size=8");
    apply_override(doc, "model.architecture=qnnn");
    apply_override(doc, "model.hidden=[3,4]");
    const auto o = config_from_json(doc);
    CHECK(o.optimizer.batch_size == 8);
    CHECK(o.model.architecture == "qnnn");
    CHECK(o.model.hidden == std::vector<int>{3, 4});
    CHECK_THROWS_AS(apply_override(doc, "novalue"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(doc, "epochs.inner=3"), std::invalid_argument);
}

TEST_CASE("config errors name the offending key")
{
    auto message = [](const json& j) {
        try {
            validate(config_from_json(j));
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(json::parse(R"({"model": {"bogus": 1}})")).find("model.bogus") != std::string::npos);
    CHECK(message(json::parse(R"({"optimizer": {"batch_size": "four"}})")).find("optimizer.batch_size") !=
          std::string::npos);
    CHECK(message(json::parse(R"({"repetitions": 0})")).find("repetitions") != std::string::npos);
    CHECK(message(json::parse(R"({"optimizer": {"kind": "rmsprop"}})")).find("optimizer.kind") != std::string::npos);
    CHECK(message(json::parse(R"({"model": {"architecture": "qnnn"}})")).empty());
}

TEST_CASE("timing harness")
{
    auto cfg = small_config();
    const auto ds = load_dataset(cfg.data);
    const auto t = time_iteration(cfg, ds, 3, 20);
    CHECK(t.iterations == 20);
    CHECK(t.mean_iteration_ms > 0.0);
    CHECK(t.stddev_iteration_ms >= 0.0);
    CHECK(t.mean_epoch_ms == doctest::Approx(t.mean_iteration_ms * static_cast<double>((ds.train.size() + 3) / 4)));
    CHECK_THROWS_AS(time_iteration(cfg, ds, 2, 20), std::invalid_argument);
    CHECK_THROWS_AS(time_iteration(cfg, ds, 3, 19), std::invalid_argument);
}

TEST_CASE("checkpoint round trip")
{
    for (const std::string arch : {"qnnn", "qenn", "mlp"}) {
        auto cfg = small_config(arch);
        cfg.repetitions = 1;
        cfg.epochs = 1;
        const auto ds = load_dataset(cfg.data);
        const auto result = train(cfg, ds);
        const auto& params = result.repetitions[0].final_params;
        const json doc = json::parse(checkpoint_json(cfg.model, params).dump());
        const auto model = load_checkpoint(doc, ds);
        CHECK(model->params() == params);
        auto reference = make_model(cfg.model, ds);
        reference->set_params(params);
        for (std::size_t i : ds.test) {
            CHECK(model->forward(ds.row(i)) == reference->forward(ds.row(i)));
        }
    }
}

TEST_CASE("library gradcheck passes and reports analytic metric values")
{
    const auto report = run_gradcheck(3, "all", 5);
    CHECK(report.passed());
    CHECK(report.max_rel_error() < 1e-5);
    CHECK(std::abs(report.qgt_single_ry - 0.25) < 1e-10);
    CHECK(std::abs(report.qgt_rz_on_zero) < 1e-10);
    CHECK(report.to_text().find("PASS") != std::string::npos);
    CHECK_THROWS_AS(run_gradcheck(0, "resnet"), std::invalid_argument);
}
