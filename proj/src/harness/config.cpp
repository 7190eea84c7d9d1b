#include "qnnbench/harness/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/classical/networks.hpp"
#include "qnnbench/qmodels/qnn_model.hpp"

namespace qnnbench::harness {

namespace {

// Reads j[key] into out when present, reporting type errors under `prefix.key`.
template <typename T>
void read(const json& j, const char* key, T& out, const std::string& prefix)
{
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        out = it->template get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("config key '" + prefix + key + "': " + e.what());
    }
}

// Re-throws a parse error with the config key it came from.
template <class F>
void with_key(const char* key, F&& f)
{
    try {
        f();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& prefix)
{
    if (!j.is_object()) {
        throw std::invalid_argument("config key '" + (prefix.empty() ? std::string("<root>") : prefix.substr(0, prefix.size() - 1)) +
                                    "' must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw std::invalid_argument("unknown config key '" + prefix + key + "'");
        }
    }
}

const json& section(const json& j, const char* key)
{
    static const json empty = json::object();
    const auto it = j.find(key);
    return it == j.end() ? empty : *it;
}

} // namespace

json to_json(const ExperimentConfig& c)
{
    return {
        {"name", c.name},
        {"epochs", c.epochs},
        {"repetitions", c.repetitions},
        {"seed", c.seed},
        {"eval_batches", c.eval_batches},
        {"model",
         {{"architecture", c.model.architecture},
          {"layers", c.model.layers},
          {"channels", c.model.channels},
          {"stride", c.model.stride},
          {"hidden", c.model.hidden},
          {"noise_p", c.model.noise_p},
          {"gradient", c.model.gradient},
          {"shift_alpha", c.model.shift_alpha}}},
        {"data",
         {{"kind", c.data.kind},
          {"seed", c.data.seed},
          {"random_labels", c.data.random_labels},
          {"path", c.data.path},
          {"csv", c.data.csv},
          {"n_per_class", c.data.n_per_class},
          {"n_features", c.data.n_features},
          {"generator_layers", c.data.generator_layers},
          {"n_train", c.data.n_train},
          {"n_test", c.data.n_test},
          {"side", c.data.side}}},
        {"optimizer",
         {{"kind", c.optimizer.kind},
          {"learning_rate", c.optimizer.learning_rate},
          {"batch_size", c.optimizer.batch_size},
          {"weight_decay", c.optimizer.weight_decay},
          {"pinv_cutoff", c.optimizer.pinv_cutoff}}},
    };
}

ExperimentConfig config_from_json(const json& j)
{
    ExperimentConfig c;
    reject_unknown(j, {"name", "epochs", "repetitions", "seed", "eval_batches", "model", "data", "optimizer"}, "");
    read(j, "name", c.name, "");
    read(j, "epochs", c.epochs, "");
    read(j, "repetitions", c.repetitions, "");
    read(j, "seed", c.seed, "");
    read(j, "eval_batches", c.eval_batches, "");

    const json& m = section(j, "model");
    reject_unknown(m, {"architecture", "layers", "channels", "stride", "hidden", "noise_p", "gradient", "shift_alpha"},
                   "model.");
    read(m, "architecture", c.model.architecture, "model.");
    read(m, "layers", c.model.layers, "model.");
    read(m, "channels", c.model.channels, "model.");
    read(m, "stride", c.model.stride, "model.");
    read(m, "hidden", c.model.hidden, "model.");
    read(m, "noise_p", c.model.noise_p, "model.");
    read(m, "gradient", c.model.gradient, "model.");
    read(m, "shift_alpha", c.model.shift_alpha, "model.");

    const json& d = section(j, "data");
    reject_unknown(d, {"kind", "seed", "random_labels", "path", "csv", "n_per_class", "n_features", "generator_layers",
                       "n_train", "n_test", "side"},
                   "data.");
    read(d, "kind", c.data.kind, "data.");
    read(d, "seed", c.data.seed, "data.");
    read(d, "random_labels", c.data.random_labels, "data.");
    read(d, "path", c.data.path, "data.");
    read(d, "csv", c.data.csv, "data.");
    read(d, "n_per_class", c.data.n_per_class, "data.");
    read(d, "n_features", c.data.n_features, "data.");
    read(d, "generator_layers", c.data.generator_layers, "data.");
    read(d, "n_train", c.data.n_train, "data.");
    read(d, "n_test", c.data.n_test, "data.");
    read(d, "side", c.data.side, "data.");

    const json& o = section(j, "optimizer");
    reject_unknown(o, {"kind", "learning_rate", "batch_size", "weight_decay", "pinv_cutoff"}, "optimizer.");
    read(o, "kind", c.optimizer.kind, "optimizer.");
    read(o, "learning_rate", c.optimizer.learning_rate, "optimizer.");
    read(o, "batch_size", c.optimizer.batch_size, "optimizer.");
    read(o, "weight_decay", c.optimizer.weight_decay, "optimizer.");
    read(o, "pinv_cutoff", c.optimizer.pinv_cutoff, "optimizer.");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read config " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) {
            throw std::invalid_argument("override key '" + key + "' has an empty component");
        }
        if (!node->is_object()) {
            throw std::invalid_argument("override key '" + key + "' descends into a non-object");
        }
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part)) {
            (*node)[part] = json::object();
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

void validate(const ExperimentConfig& c)
{
    if (c.epochs < 0) {
        throw std::invalid_argument("config key 'epochs' must be >= 0");
    }
    if (c.repetitions < 1) {
        throw std::invalid_argument("config key 'repetitions' must be >= 1");
    }
    if (c.eval_batches < 1) {
        throw std::invalid_argument("config key 'eval_batches' must be >= 1");
    }
    const auto& a = c.model.architecture;
    if (a != "qnnn" && a != "qenn" && a != "qcnn" && a != "mlp" && a != "cnn") {
        throw std::invalid_argument("config key 'model.architecture': unknown architecture '" + a + "'");
    }
    if (c.model.layers < 1) {
        throw std::invalid_argument("config key 'model.layers' must be >= 1");
    }
    if (!(c.model.noise_p >= 0.0 && c.model.noise_p <= 1.0)) {
        throw std::invalid_argument("config key 'model.noise_p' must lie in [0, 1]");
    }
    with_key("model.gradient", [&] { qmodels::parse_gradient_method(c.model.gradient); });
    with_key("data.kind", [&] { data::parse_provenance(c.data.kind); });
    if (!(c.data.random_labels >= 0.0 && c.data.random_labels <= 1.0)) {
        throw std::invalid_argument("config key 'data.random_labels' must lie in [0, 1]");
    }
    optim::OptimizerState s;
    with_key("optimizer.kind", [&] { s.kind = optim::parse_optimizer(c.optimizer.kind); });
    s.learning_rate = c.optimizer.learning_rate;
    s.batch_size = c.optimizer.batch_size;
    s.weight_decay = c.optimizer.weight_decay;
    s.pinv_cutoff = c.optimizer.pinv_cutoff;
    try {
        optim::validate(s);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config section 'optimizer': ") + e.what());
    }
    if (s.kind == optim::OptimizerKind::SQNGD && a != "qnnn" && a != "qenn") {
        throw std::invalid_argument("config key 'optimizer.kind': sqngd needs a qnnn or qenn model");
    }
}

std::string config_hash(const ExperimentConfig& cfg)
{
    const std::string canonical = to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("QNNBENCH_DATA_DIR"); env && *env) {
        return env;
    }
    return "data";
}

data::Dataset load_dataset(const DataSpec& spec, const std::filesystem::path& data_dir)
{
    const auto kind = data::parse_provenance(spec.kind);
    if (spec.csv) {
        if (spec.path.empty()) {
            throw std::invalid_argument("config key 'data.path' is required when data.csv is set");
        }
        return data::read_csv(spec.path, kind);
    }
    switch (kind) {
    case data::Provenance::Synthetic: {
        data::SyntheticOptions o;
        o.seed = spec.seed;
        o.n_per_class = spec.n_per_class;
        o.n_features = spec.n_features;
        o.generator_layers = spec.generator_layers;
        return data::generate_synthetic(o);
    }
    case data::Provenance::Wine:
        return data::load_wine(spec.path.empty() ? data_dir / "wine.data" : std::filesystem::path(spec.path), spec.seed);
    case data::Provenance::Mnist: {
        const std::filesystem::path dir = spec.path.empty() ? data_dir : std::filesystem::path(spec.path);
        data::MnistOptions o;
        o.n_train = spec.n_train;
        o.n_test = spec.n_test;
        o.side = spec.side;
        o.seed = spec.seed;
        return data::load_mnist(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", o);
    }
    }
    throw std::logic_error("unreachable");
}

std::unique_ptr<Model> make_model(const ModelSpec& spec, const data::Dataset& ds)
{
    const auto method = qmodels::parse_gradient_method(spec.gradient);
    const auto& a = spec.architecture;
    if (a == "qnnn" || a == "qenn") {
        if (ds.n_classes != 2) {
            throw std::invalid_argument(a + " is a binary classifier; dataset has " + std::to_string(ds.n_classes) +
                                        " classes");
        }
        const int n = static_cast<int>(ds.n_features);
        auto c = a == "qnnn" ? circuit::build_qnnn(n, spec.layers) : circuit::build_qenn(n, spec.layers);
        return std::make_unique<qmodels::QnnModel>(a, std::move(c), sim::Observable::pauli_z(0), spec.noise_p, method,
                                                   grad::ShiftRuleConfig{spec.shift_alpha});
    }
    if (a == "qcnn" || a == "cnn") {
        if (ds.image_side == 0) {
            throw std::invalid_argument(a + " needs image data");
        }
        const auto classes = static_cast<std::size_t>(ds.n_classes);
        if (a == "qcnn") {
            return std::make_unique<qmodels::QcnnModel>(ds.image_side, spec.channels, spec.stride, spec.noise_p, method,
                                                        32, classes);
        }
        return std::make_unique<classical::ConvNet>(ds.image_side, spec.channels, spec.stride, 32, classes);
    }
    if (a == "mlp") {
        std::vector<std::size_t> widths{ds.n_features};
        for (int h : spec.hidden) {
            if (h < 1) {
                throw std::invalid_argument("config key 'model.hidden' must hold positive widths");
            }
            widths.push_back(static_cast<std::size_t>(h));
        }
        widths.push_back(static_cast<std::size_t>(ds.n_classes));
        return std::make_unique<classical::DenseNet>(std::move(widths));
    }
    throw std::invalid_argument("config key 'model.architecture': unknown architecture '" + a + "'");
}

optim::OptimizerState make_optimizer(const OptimizerSpec& spec, std::size_t n_train)
{
    optim::OptimizerState s;
    s.kind = optim::parse_optimizer(spec.kind);
    s.learning_rate = spec.learning_rate;
    s.batch_size = s.kind == optim::OptimizerKind::GD ? static_cast<int>(n_train) : spec.batch_size;
    s.weight_decay = spec.weight_decay;
    s.pinv_cutoff = spec.pinv_cutoff;
    optim::validate(s);
    return s;
}

} // namespace qnnbench::harness
