#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnnbench/data/dataset.hpp"
#include "qnnbench/model.hpp"
#include "qnnbench/optim/optimizer.hpp"

namespace qnnbench::harness {

using nlohmann::json;

struct ModelSpec {
    std::string architecture = "qnnn"; // qnnn | qenn | qcnn | mlp | cnn
    int layers = 3;
    int channels = 4;
    int stride = 2;
    std::vector<int> hidden{7};
    double noise_p = 0.0;
    std::string gradient = "shift"; // shift | adjoint
    double shift_alpha = 1.5707963267948966;
};

struct DataSpec {
    std::string kind = "synthetic"; // synthetic | wine | mnist
    std::uint64_t seed = 0;
    double random_labels = 0.0;
    std::string path;                // file (wine, csv) or directory (mnist); empty = data dir default
    bool csv = false;                // `path` is a canonical dataset CSV
    int n_per_class = 200;
    int n_features = 16;
    int generator_layers = 2;
    std::size_t n_train = 2000;
    std::size_t n_test = 2000;
    int side = 10;
};

struct OptimizerSpec {
    std::string kind = "sgd"; // gd | sgd | sqngd | adam
    double learning_rate = 0.01;
    int batch_size = 4;
    double weight_decay = 0.0;
    double pinv_cutoff = 1e-8;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModelSpec model;
    DataSpec data;
    OptimizerSpec optimizer;
    int epochs = 20;
    int repetitions = 10;
    std::uint64_t seed = 0;
    int eval_batches = 8;
};

json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys and wrongly typed values
/// throw std::invalid_argument naming the dotted key.
ExperimentConfig config_from_json(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets `dotted.key=value` in a config document. The value is parsed as
/// JSON when possible, otherwise taken as a string. Missing intermediate
/// objects are created.
void apply_override(json& doc, const std::string& assignment);

/// Throws std::invalid_argument unless the components are constructible.
void validate(const ExperimentConfig& cfg);

/// FNV-1a of the canonical (key-sorted, compact) JSON form, as 16 hex digits.
/// Independent of key order in the source file.
std::string config_hash(const ExperimentConfig& cfg);

/// Default data directory: $QNNBENCH_DATA_DIR, else ./data.
std::filesystem::path default_data_dir();

data::Dataset load_dataset(const DataSpec& spec, const std::filesystem::path& data_dir = default_data_dir());

std::unique_ptr<Model> make_model(const ModelSpec& spec, const data::Dataset& ds);

optim::OptimizerState make_optimizer(const OptimizerSpec& spec, std::size_t n_train);

} // namespace qnnbench::harness
