#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnnbench/common.hpp"
#include "qnnbench/data/dataset.hpp"
#include "qnnbench/harness/config.hpp"
#include "qnnbench/harness/gradcheck.hpp"
#include "qnnbench/harness/train.hpp"

namespace fs = std::filesystem;
using namespace qnnbench;
using harness::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Input problems the user can fix: exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

void write_json(const fs::path& path, const json& doc)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

// Refuses a non-empty existing directory unless forced.
void prepare_out_dir(const fs::path& dir, bool force)
{
    if (fs::exists(dir) && !fs::is_directory(dir)) {
        throw UsageError("output path " + dir.string() + " exists and is not a directory");
    }
    if (fs::exists(dir) && !fs::is_empty(dir) && !force) {
        throw UsageError("output directory " + dir.string() + " already exists; pass --force to overwrite");
    }
    fs::create_directories(dir);
}

harness::ExperimentConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides,
                                         double random_labels)
{
    json doc;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw UsageError("cannot read config " + path);
        }
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError(path + ": " + e.what());
        }
    } else {
        doc = json::object();
    }
    for (const auto& o : overrides) {
        harness::apply_override(doc, o);
    }
    if (random_labels >= 0.0) {
        doc["data"]["random_labels"] = random_labels;
    }
    auto cfg = harness::config_from_json(doc);
    harness::validate(cfg);
    return cfg;
}

void add_config_options(CLI::App* cmd, std::string& config, std::vector<std::string>& overrides, double& random_labels,
                        std::string& data_dir)
{
    cmd->add_option("--config", config, "Experiment config (JSON)");
    cmd->add_option("--set", overrides, "Override a config value: dotted.key=value (repeatable)");
    cmd->add_option("--random-labels", random_labels, "Fraction of training labels to randomize")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--data-dir", data_dir, "Data directory (default $QNNBENCH_DATA_DIR or ./data)");
}

fs::path data_dir_or_default(const std::string& dir) { return dir.empty() ? harness::default_data_dir() : fs::path(dir); }

json manifest(const std::string& run_id, const fs::path& out, const std::string& config_path,
              const std::vector<std::string>& artifacts)
{
    return {{"run_id", run_id}, {"out_dir", out.string()}, {"config", config_path}, {"artifacts", artifacts}};
}

void print_final(const harness::TrainResult& r)
{
    if (r.mean.empty()) {
        std::printf("no successful repetitions\n");
        return;
    }
    const auto& m = r.mean.back();
    std::printf("epoch %d  train_acc %.4f  test_acc %.4f  gen_error %.4f  loss %.4f  J %.4g  failed %d/%zu\n", m.epoch,
                m.train_accuracy, m.test_accuracy, m.generalization_error, m.train_loss, m.gradient_norm,
                r.failed_count(), r.repetitions.size());
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides, double random_labels,
              const std::string& data_dir, const fs::path& out, bool force, bool strict, int jobs)
{
    const auto cfg = resolve_config(config_path, overrides, random_labels);
    prepare_out_dir(out, force);
    const std::string hash = harness::config_hash(cfg);
    const std::string run_id = utc_timestamp() + "-" + hash;
    const auto ds = harness::load_dataset(cfg.data, data_dir_or_default(data_dir));
    const auto result = harness::train(cfg, ds, {jobs});

    std::vector<std::string> artifacts{"config.json", "metrics.csv", "summary.json"};
    write_json(out / "config.json", harness::to_json(cfg));
    harness::write_metrics_csv(out / "metrics.csv", hash, result);
    write_json(out / "summary.json", harness::summary_json(cfg, run_id, result));
    fs::create_directories(out / "checkpoints");
    for (std::size_t r = 0; r < result.repetitions.size(); ++r) {
        const auto& rep = result.repetitions[r];
        if (rep.failed) {
            continue;
        }
        const std::string name = "checkpoints/rep_" + std::to_string(r) + ".json";
        write_json(out / name, harness::checkpoint_json(cfg.model, rep.final_params));
        artifacts.push_back(name);
    }
    write_json(out / "manifest.json", manifest(run_id, out, config_path, artifacts));

    std::printf("run %s -> %s\n", run_id.c_str(), out.string().c_str());
    print_final(result);
    for (std::size_t r = 0; r < result.repetitions.size(); ++r) {
        if (result.repetitions[r].failed) {
            std::fprintf(stderr, "repetition %zu failed: %s\n", r, result.repetitions[r].failure.c_str());
        }
    }
    return strict && result.failed_count() > 0 ? kFailure : kOk;
}

int cmd_gradcheck(std::uint64_t seed, const std::string& arch, int draws)
{
    const auto report = harness::run_gradcheck(seed, arch, draws);
    std::fputs(report.to_text().c_str(), stdout);
    return report.passed() ? kOk : kFailure;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

int cmd_report(const std::vector<std::string>& runs, const std::string& out_path)
{
    if (runs.empty()) {
        throw UsageError("report needs at least one run directory");
    }
    std::ofstream merged;
    std::ostream* sink = &std::cout;
    if (!out_path.empty()) {
        merged.open(out_path);
        if (!merged) {
            throw std::runtime_error("cannot write " + out_path);
        }
        sink = &merged;
    }
    *sink << "run," << harness::kMetricsHeader << '\n';

    struct Final {
        std::string run;
        int epoch = -1;
        double sums[5] = {};
        int count = 0;
    };
    std::vector<Final> finals;
    for (const auto& dir : runs) {
        const fs::path file = fs::is_directory(dir) ? fs::path(dir) / "metrics.csv" : fs::path(dir);
        std::ifstream in(file);
        if (!in) {
            throw UsageError("cannot read " + file.string());
        }
        std::string line;
        if (!std::getline(in, line) || line != harness::kMetricsHeader) {
            throw UsageError(file.string() + ": unexpected header (want '" + std::string(harness::kMetricsHeader) + "')");
        }
        Final f;
        f.run = fs::path(dir).filename().string();
        std::vector<std::vector<std::string>> rows;
        int lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) {
                continue;
            }
            auto cells = split_csv_line(line);
            if (cells.size() != 9) {
                throw UsageError(file.string() + ":" + std::to_string(lineno) + ": expected 9 columns");
            }
            *sink << f.run << ',' << line << '\n';
            f.epoch = std::max(f.epoch, std::stoi(cells[2]));
            rows.push_back(std::move(cells));
        }
        for (const auto& c : rows) {
            if (std::stoi(c[2]) == f.epoch) {
                for (int k = 0; k < 5; ++k) {
                    f.sums[k] += std::stod(c[3 + k]);
                }
                ++f.count;
            }
        }
        finals.push_back(f);
    }

    std::FILE* table = out_path.empty() ? stderr : stdout;
    std::fprintf(table, "%-24s %6s %5s %10s %10s %10s %10s %10s\n", "run", "epoch", "reps", "train_acc", "test_acc",
                 "gen_error", "loss", "grad_norm");
    for (const auto& f : finals) {
        const double n = f.count > 0 ? f.count : 1;
        std::fprintf(table, "%-24s %6d %5d %10.4f %10.4f %10.4f %10.4f %10.4g\n", f.run.c_str(), f.epoch, f.count,
                     f.sums[0] / n, f.sums[1] / n, f.sums[3] / n, f.sums[2] / n, f.sums[4] / n);
    }
    return kOk;
}

int cmd_generate_data(const std::string& kind, const fs::path& out, std::uint64_t seed, const std::string& source,
                      const std::vector<std::string>& overrides, const std::string& data_dir, bool force)
{
    json doc = {{"data", {{"kind", kind}, {"seed", seed}}}};
    if (!source.empty()) {
        doc["data"]["path"] = source;
    }
    for (const auto& o : overrides) {
        harness::apply_override(doc, o);
    }
    const auto cfg = harness::config_from_json(doc);
    if (fs::exists(out) && !force) {
        throw UsageError(out.string() + " already exists; pass --force to overwrite");
    }
    if (!source.empty() && !fs::exists(source)) {
        throw std::runtime_error("source not found: " + source);
    }
    const auto ds = harness::load_dataset(cfg.data, data_dir_or_default(data_dir));
    data::write_csv(ds, out);
    std::printf("wrote %zu rows x %zu features (%zu train, %zu test) to %s\n", ds.size(), ds.n_features, ds.train.size(),
                ds.test.size(), out.string().c_str());
    return kOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides, double random_labels,
              const std::string& data_dir, const std::string& axis_name, const std::vector<double>& values,
              const fs::path& out, bool force, bool strict, int jobs)
{
    if (values.empty()) {
        throw UsageError("sweep needs at least one value");
    }
    const auto cfg = resolve_config(config_path, overrides, random_labels);
    const auto axis = harness::parse_sweep_axis(axis_name);
    prepare_out_dir(out, force);
    const auto ds = harness::load_dataset(cfg.data, data_dir_or_default(data_dir));
    const auto points = harness::sweep(cfg, ds, axis, values, {jobs});

    std::ofstream table(out / "sweep.csv");
    table << "axis,value,epoch,train_acc,test_acc,train_loss,gen_error,grad_norm,failed\n";
    std::vector<std::string> artifacts{"sweep.csv"};
    int failed = 0;
    for (const auto& p : points) {
        char label[64];
        std::snprintf(label, sizeof label, "%s=%g", harness::sweep_axis_name(axis).c_str(), p.value);
        const fs::path sub = out / label;
        fs::create_directories(sub);
        harness::write_metrics_csv(sub / "metrics.csv", harness::config_hash(cfg) + "-" + label, p.result);
        artifacts.push_back(std::string(label) + "/metrics.csv");
        failed += p.result.failed_count();
        if (p.result.mean.empty()) {
            table << harness::sweep_axis_name(axis) << ',' << p.value << ",,,,,,," << p.result.failed_count() << '\n';
            continue;
        }
        const auto& m = p.result.mean.back();
        char row[512];
        std::snprintf(row, sizeof row, "%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      harness::sweep_axis_name(axis).c_str(), p.value, m.epoch, m.train_accuracy, m.test_accuracy,
                      m.train_loss, m.generalization_error, m.gradient_norm, p.result.failed_count());
        table << row;
        std::printf("%-16s ", label);
        print_final(p.result);
    }
    write_json(out / "manifest.json",
               manifest(utc_timestamp() + "-" + harness::config_hash(cfg), out, config_path, artifacts));
    return strict && failed > 0 ? kFailure : kOk;
}

int cmd_timeit(const std::string& config_path, const std::vector<std::string>& overrides, const std::string& data_dir,
               const std::vector<int>& features, int warmup, int iterations)
{
    auto base = resolve_config(config_path, overrides, -1.0);
    std::vector<int> sizes = features;
    if (sizes.empty()) {
        sizes.push_back(base.data.n_features);
    }
    std::printf("%-10s %-8s %14s %12s %14s\n", "model", "features", "ms/iteration", "stddev", "ms/epoch");
    for (int n : sizes) {
        auto cfg = base;
        cfg.data.n_features = n;
        harness::validate(cfg);
        const auto ds = harness::load_dataset(cfg.data, data_dir_or_default(data_dir));
        const auto t = harness::time_iteration(cfg, ds, warmup, iterations);
        std::printf("%-10s %-8zu %14.4f %12.4f %14.2f\n", cfg.model.architecture.c_str(), ds.n_features,
                    t.mean_iteration_ms, t.stddev_iteration_ms, t.mean_epoch_ms);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantum and classical neural network benchmarking"};
    app.require_subcommand(1);

    std::string config, data_dir, out, arch = "all", axis, source, report_out, kind = "synthetic";
    std::vector<std::string> overrides, runs;
    std::vector<double> values;
    std::vector<int> features;
    double random_labels = -1.0;
    bool force = false, strict = false;
    int jobs = 1, draws = 20, warmup = 3, iterations = 20;
    std::uint64_t seed = 0;

    auto* train = app.add_subcommand("train", "Train a configured experiment");
    add_config_options(train, config, overrides, random_labels, data_dir);
    train->add_option("--out", out, "Output directory")->required();
    train->add_flag("--force", force, "Overwrite an existing output directory");
    train->add_flag("--strict", strict, "Exit 1 if any repetition failed");
    train->add_option("--jobs", jobs, "Repetitions trained concurrently")->check(CLI::PositiveNumber);

    auto* gradcheck = app.add_subcommand("gradcheck", "Shift rule vs finite differences and metric oracles");
    gradcheck->add_option("--seed", seed, "Random draw seed");
    gradcheck->add_option("--arch", arch, "all | qnnn | qenn | qcnn");
    gradcheck->add_option("--draws", draws, "Random draws per circuit")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "Merge run metrics into one long CSV plus a summary table");
    report->add_option("runs", runs, "Run directories or metrics CSV files");
    report->add_option("--out", report_out, "Merged CSV path (default: stdout, table on stderr)");

    auto* generate = app.add_subcommand("generate-data", "Write a dataset in the canonical CSV format");
    generate->add_option("--kind", kind, "synthetic | wine | mnist");
    generate->add_option("--out", out, "Output CSV")->required();
    generate->add_option("--seed", seed, "Generator / split seed");
    generate->add_option("--source", source, "Source file (wine) or directory (mnist)");
    generate->add_option("--set", overrides, "Override a data setting, e.g. data.n_features=8");
    generate->add_option("--data-dir", data_dir, "Data directory (default $QNNBENCH_DATA_DIR or ./data)");
    generate->add_flag("--force", force, "Overwrite an existing file");

    auto* sweep = app.add_subcommand("sweep", "Train once per value of one axis, with shared seeds");
    add_config_options(sweep, config, overrides, random_labels, data_dir);
    sweep->add_option("--axis", axis, "batch_size | noise_p | layers")->required();
    sweep->add_option("--values", values, "Axis values")->required()->delimiter(',');
    sweep->add_option("--out", out, "Output directory")->required();
    sweep->add_flag("--force", force, "Overwrite an existing output directory");
    sweep->add_flag("--strict", strict, "Exit 1 if any repetition failed");
    sweep->add_option("--jobs", jobs, "Repetitions trained concurrently")->check(CLI::PositiveNumber);

    auto* timeit = app.add_subcommand("timeit", "Time optimizer iterations");
    double unused_random = -1.0;
    add_config_options(timeit, config, overrides, unused_random, data_dir);
    timeit->add_option("--features", features, "Input sizes (qubit counts) to sweep")->delimiter(',');
    timeit->add_option("--warmup", warmup, "Untimed iterations")->check(CLI::Range(3, 1000000));
    timeit->add_option("--iterations", iterations, "Timed iterations")->check(CLI::Range(20, 1000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*train) {
            return cmd_train(config, overrides, random_labels, data_dir, out, force, strict, jobs);
        }
        if (*gradcheck) {
            return cmd_gradcheck(seed, arch, draws);
        }
        if (*report) {
            return cmd_report(runs, report_out);
        }
        if (*generate) {
            return cmd_generate_data(kind, out, seed, source, overrides, data_dir, force);
        }
        if (*sweep) {
            return cmd_sweep(config, overrides, random_labels, data_dir, axis, values, out, force, strict, jobs);
        }
        if (*timeit) {
            return cmd_timeit(config, overrides, data_dir, features, warmup, iterations);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
    return kUsage;
}
