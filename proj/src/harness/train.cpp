#include "qnnbench/harness/train.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include <omp.h>

#include "qnnbench/common.hpp"
#include "qnnbench/grad/gradients.hpp"

namespace qnnbench::harness {

namespace {

using Clock = std::chrono::steady_clock;

// Seed streams derived from (run seed, repetition).
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kLabelStream = 2;
constexpr std::uint64_t kBatchStream = 3;
constexpr std::uint64_t kEvalStream = 4;

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::size_t> to_rows(const std::vector<std::size_t>& positions, const std::vector<std::size_t>& train)
{
    std::vector<std::size_t> rows(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        rows[k] = train[positions[k]];
    }
    return rows;
}

void check_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw NumericalError(std::string("non-finite ") + what);
    }
}

std::vector<double> apply_step(const Model& model, const data::Dataset& ds, const std::vector<std::size_t>& batch,
                               optim::OptimizerState& state)
{
    const LossAndGrad lg = loss_and_grad(model, ds, batch);
    check_finite(lg.loss, "training loss");
    switch (state.kind) {
    case optim::OptimizerKind::GD:
    case optim::OptimizerKind::SGD:
        return optim::step_gd(model.params(), lg.gradient, state);
    case optim::OptimizerKind::SQNGD:
        return optim::step_sqngd(model.params(), lg.gradient, batch_metric(model, ds, batch), state);
    case optim::OptimizerKind::Adam:
        return optim::step_adam(model.params(), lg.gradient, state);
    }
    throw std::logic_error("unreachable");
}

MetricsRecord evaluate_epoch(const Model& model, const data::Dataset& train_view, const data::Dataset& ds,
                             const std::vector<std::vector<std::size_t>>& eval_batches, int epoch)
{
    MetricsRecord r;
    r.epoch = epoch;
    const Evaluation tr = evaluate(model, train_view, train_view.train, train_view.labels);
    const Evaluation te = evaluate(model, ds, ds.test, ds.labels);
    r.train_accuracy = tr.accuracy;
    r.train_loss = tr.loss;
    r.test_accuracy = te.accuracy;
    r.generalization_error = generalization_error(r.train_accuracy, r.test_accuracy);
    std::vector<std::vector<double>> grads;
    for (const auto& b : eval_batches) {
        grads.push_back(loss_and_grad(model, train_view, b).gradient);
    }
    r.gradient_norm = grad::gradient_norm(grads);
    check_finite(r.train_loss, "training loss");
    check_finite(r.gradient_norm, "gradient norm");
    return r;
}

RepetitionResult run_repetition(const ExperimentConfig& cfg, const data::Dataset& ds, int rep)
{
    RepetitionResult out;
    const auto r = static_cast<std::uint64_t>(rep);
    const data::Dataset train_view = cfg.data.random_labels > 0.0
                                         ? data::randomize_labels(ds, cfg.data.random_labels, mix_seed(cfg.seed, r, kLabelStream))
                                         : ds;
    auto model = make_model(cfg.model, ds);
    model->initialize(mix_seed(cfg.seed, r, kInitStream));
    optim::OptimizerState state = make_optimizer(cfg.optimizer, ds.train.size());

    // Fixed batches for the trainability estimate, drawn once per repetition.
    auto eval_batches = optim::make_batches(ds.train.size(), state.batch_size, mix_seed(cfg.seed, r, kEvalStream));
    eval_batches.resize(std::min<std::size_t>(eval_batches.size(), static_cast<std::size_t>(cfg.eval_batches)));
    for (auto& b : eval_batches) {
        b = to_rows(b, ds.train);
    }

    try {
        out.records.push_back(evaluate_epoch(*model, train_view, ds, eval_batches, 0));
        for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
            const auto start = Clock::now();
            const auto batches = optim::make_batches(ds.train.size(), state.batch_size,
                                                     mix_seed(cfg.seed, r, kBatchStream + 16 * static_cast<std::uint64_t>(epoch)));
            for (const auto& positions : batches) {
                model->set_params(apply_step(*model, train_view, to_rows(positions, ds.train), state));
            }
            const double step_ms = ms_since(start);
            MetricsRecord rec = evaluate_epoch(*model, train_view, ds, eval_batches, epoch);
            rec.wall_ms = step_ms;
            rec.iteration_ms = step_ms / static_cast<double>(batches.size());
            out.records.push_back(rec);
        }
    } catch (const NumericalError& e) {
        out.failed = true;
        out.failure = e.what();
    }
    out.final_params = model->params();
    return out;
}

std::vector<MetricsRecord> pointwise_mean(const std::vector<RepetitionResult>& reps, int epochs)
{
    std::vector<MetricsRecord> mean;
    for (int e = 0; e <= epochs; ++e) {
        MetricsRecord m;
        m.epoch = e;
        int n = 0;
        for (const auto& rep : reps) {
            if (rep.failed) {
                continue;
            }
            const MetricsRecord& r = rep.records[static_cast<std::size_t>(e)];
            m.train_accuracy += r.train_accuracy;
            m.test_accuracy += r.test_accuracy;
            m.train_loss += r.train_loss;
            m.generalization_error += r.generalization_error;
            m.gradient_norm += r.gradient_norm;
            m.wall_ms += r.wall_ms;
            m.iteration_ms += r.iteration_ms;
            ++n;
        }
        if (n == 0) {
            break;
        }
        const double inv = 1.0 / n;
        m.train_accuracy *= inv;
        m.test_accuracy *= inv;
        m.train_loss *= inv;
        m.generalization_error *= inv;
        m.gradient_norm *= inv;
        m.wall_ms *= inv;
        m.iteration_ms *= inv;
        mean.push_back(m);
    }
    return mean;
}

} // namespace

int TrainResult::failed_count() const
{
    return static_cast<int>(std::count_if(repetitions.begin(), repetitions.end(), [](const auto& r) { return r.failed; }));
}

double generalization_error(double train_accuracy, double test_accuracy)
{
    return train_accuracy - test_accuracy;
}

TrainResult train(const ExperimentConfig& cfg, const data::Dataset& ds, const RunOptions& opts)
{
    validate(cfg);
    TrainResult result;
    result.repetitions.resize(static_cast<std::size_t>(cfg.repetitions));
    const int jobs = std::clamp(opts.jobs, 1, cfg.repetitions);
    if (jobs == 1) {
        for (int r = 0; r < cfg.repetitions; ++r) {
            result.repetitions[static_cast<std::size_t>(r)] = run_repetition(cfg, ds, r);
        }
    } else {
        // Workers claim repetitions in order; each result lands in its own slot.
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
        const int threads_each = std::max(1, omp_get_max_threads() / jobs);
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                omp_set_num_threads(threads_each);
                try {
                    for (int r = next++; r < cfg.repetitions; r = next++) {
                        result.repetitions[static_cast<std::size_t>(r)] = run_repetition(cfg, ds, r);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) {
            t.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    result.mean = pointwise_mean(result.repetitions, cfg.epochs);
    return result;
}

TrainResult train(const ExperimentConfig& cfg, const RunOptions& opts)
{
    validate(cfg);
    return train(cfg, load_dataset(cfg.data), opts);
}

SweepAxis parse_sweep_axis(const std::string& name)
{
    if (name == "batch_size") {
        return SweepAxis::BatchSize;
    }
    if (name == "noise_p") {
        return SweepAxis::NoiseP;
    }
    if (name == "layers") {
        return SweepAxis::Layers;
    }
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected batch_size, noise_p or layers)");
}

std::string sweep_axis_name(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::BatchSize:
        return "batch_size";
    case SweepAxis::NoiseP:
        return "noise_p";
    case SweepAxis::Layers:
        return "layers";
    }
    return "?";
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                              const RunOptions& opts)
{
    validate(cfg);
    return sweep(cfg, load_dataset(cfg.data), axis, values, opts);
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, const data::Dataset& ds, SweepAxis axis,
                              const std::vector<double>& values, const RunOptions& opts)
{
    if (values.empty()) {
        throw std::invalid_argument("sweep needs at least one value");
    }
    std::vector<SweepPoint> points;
    for (double v : values) {
        ExperimentConfig c = cfg;
        switch (axis) {
        case SweepAxis::BatchSize:
            c.optimizer.batch_size = static_cast<int>(std::lround(v));
            break;
        case SweepAxis::NoiseP:
            c.model.noise_p = v;
            break;
        case SweepAxis::Layers:
            c.model.layers = static_cast<int>(std::lround(v));
            break;
        }
        points.push_back({v, train(c, ds, opts)});
    }
    return points;
}

Timing time_iteration(const ExperimentConfig& cfg, const data::Dataset& ds, int warmup, int iterations)
{
    validate(cfg);
    if (warmup < 3 || iterations < 20) {
        throw std::invalid_argument("timing needs at least 3 warmup and 20 timed iterations");
    }
    auto model = make_model(cfg.model, ds);
    model->initialize(mix_seed(cfg.seed, 0, kInitStream));
    optim::OptimizerState state = make_optimizer(cfg.optimizer, ds.train.size());
    const auto batches = optim::make_batches(ds.train.size(), state.batch_size, mix_seed(cfg.seed, 0, kBatchStream));

    std::vector<double> samples;
    for (int it = 0; it < warmup + iterations; ++it) {
        const auto batch = to_rows(batches[static_cast<std::size_t>(it) % batches.size()], ds.train);
        const auto start = Clock::now();
        model->set_params(apply_step(*model, ds, batch, state));
        const double ms = ms_since(start);
        if (it >= warmup) {
            samples.push_back(ms);
        }
    }
    Timing t;
    t.iterations = iterations;
    t.mean_iteration_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / iterations;
    double var = 0.0;
    for (double s : samples) {
        var += (s - t.mean_iteration_ms) * (s - t.mean_iteration_ms);
    }
    t.stddev_iteration_ms = iterations > 1 ? std::sqrt(var / (iterations - 1)) : 0.0;
    t.mean_epoch_ms = t.mean_iteration_ms * static_cast<double>(batches.size());
    return t;
}

void write_metrics_csv(const std::filesystem::path& path, const std::string& run_id, const TrainResult& result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << kMetricsHeader << '\n';
    char wall[32];
    for (std::size_t rep = 0; rep < result.repetitions.size(); ++rep) {
        for (const auto& r : result.repetitions[rep].records) {
            std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
            out << run_id << ',' << rep << ',' << r.epoch << ',' << format_double(r.train_accuracy) << ','
                << format_double(r.test_accuracy) << ',' << format_double(r.train_loss) << ','
                << format_double(r.generalization_error) << ',' << format_double(r.gradient_norm) << ',' << wall
                << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write to " + path.string() + " failed");
    }
}

json summary_json(const ExperimentConfig& cfg, const std::string& run_id, const TrainResult& result)
{
    json final_metrics = nullptr;
    if (!result.mean.empty()) {
        const auto& m = result.mean.back();
        final_metrics = {{"epoch", m.epoch},
                         {"train_acc", m.train_accuracy},
                         {"test_acc", m.test_accuracy},
                         {"train_loss", m.train_loss},
                         {"gen_error", m.generalization_error},
                         {"grad_norm", m.gradient_norm},
                         {"epoch_ms", m.wall_ms},
                         {"iteration_ms", m.iteration_ms}};
    }
    json failures = json::array();
    for (std::size_t r = 0; r < result.repetitions.size(); ++r) {
        if (result.repetitions[r].failed) {
            failures.push_back({{"repetition", r}, {"error", result.repetitions[r].failure}});
        }
    }
    return {{"run_id", run_id},
            {"config_hash", config_hash(cfg)},
            {"config", to_json(cfg)},
            {"repetitions", result.repetitions.size()},
            {"failed_repetitions", result.failed_count()},
            {"failures", failures},
            {"final", final_metrics}};
}

json checkpoint_json(const ModelSpec& spec, const std::vector<double>& params)
{
    ExperimentConfig holder;
    holder.model = spec;
    return {{"model", to_json(holder)["model"]}, {"params", params}};
}

std::unique_ptr<Model> load_checkpoint(const json& checkpoint, const data::Dataset& ds)
{
    if (!checkpoint.contains("model") || !checkpoint.contains("params")) {
        throw std::invalid_argument("checkpoint needs 'model' and 'params'");
    }
    const ExperimentConfig cfg = config_from_json({{"model", checkpoint["model"]}});
    auto model = make_model(cfg.model, ds);
    model->set_params(checkpoint["params"].get<std::vector<double>>());
    return model;
}

} // namespace qnnbench::harness
