#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qnnbench/harness/config.hpp"

namespace qnnbench::harness {

struct MetricsRecord {
    int epoch = 0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double train_loss = 0.0;
    double generalization_error = 0.0;
    double gradient_norm = 0.0;
    double wall_ms = 0.0;      // whole epoch; 0 for the initial evaluation
    double iteration_ms = 0.0; // mean per optimizer step

    friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct RepetitionResult {
    std::vector<MetricsRecord> records; // epochs 0..E, fewer if the run failed
    std::vector<double> final_params;
    bool failed = false;
    std::string failure;
};

struct TrainResult {
    std::vector<RepetitionResult> repetitions;
    std::vector<MetricsRecord> mean; // pointwise over successful repetitions
    int failed_count() const;
};

double generalization_error(double train_accuracy, double test_accuracy);

struct RunOptions {
    int jobs = 1; // repetitions trained concurrently
};

/// Trains every repetition on `ds`. Repetition r initializes from
/// mix_seed(seed, r), reshuffles batches every epoch, and (with
/// data.random_labels > 0) trains on its own label randomization. Test
/// accuracy is always against the dataset's labels.
TrainResult train(const ExperimentConfig& cfg, const data::Dataset& ds, const RunOptions& opts = {});
TrainResult train(const ExperimentConfig& cfg, const RunOptions& opts = {});

enum class SweepAxis { BatchSize, NoiseP, Layers };
SweepAxis parse_sweep_axis(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepPoint {
    double value = 0.0;
    TrainResult result;
};

/// One train() per value with the same seeds, on one shared dataset.
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                              const RunOptions& opts = {});
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, const data::Dataset& ds, SweepAxis axis,
                              const std::vector<double>& values, const RunOptions& opts = {});

struct Timing {
    double mean_iteration_ms = 0.0;
    double stddev_iteration_ms = 0.0;
    double mean_epoch_ms = 0.0; // mean iteration time x steps per epoch
    int iterations = 0;
};

/// Times optimizer steps (gradient + update) with a monotonic clock after
/// `warmup` untimed steps. Needs warmup >= 3 and iterations >= 20.
Timing time_iteration(const ExperimentConfig& cfg, const data::Dataset& ds, int warmup = 3, int iterations = 20);

// Artifacts

inline constexpr const char* kMetricsHeader = "run_id,repetition,epoch,train_acc,test_acc,train_loss,gen_error,grad_norm,wall_ms";

void write_metrics_csv(const std::filesystem::path& path, const std::string& run_id, const TrainResult& result);
json summary_json(const ExperimentConfig& cfg, const std::string& run_id, const TrainResult& result);
json checkpoint_json(const ModelSpec& spec, const std::vector<double>& params);

/// Rebuilds a model from a checkpoint document against a dataset of the
/// same shape.
std::unique_ptr<Model> load_checkpoint(const json& checkpoint, const data::Dataset& ds);

} // namespace qnnbench::harness
