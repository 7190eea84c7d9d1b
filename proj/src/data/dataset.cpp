#include "qnnbench/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qnnbench/common.hpp"

namespace qnnbench::data {

std::string provenance_name(Provenance p)
{
    switch (p) {
    case Provenance::Synthetic:
        return "synthetic";
    case Provenance::Wine:
        return "wine";
    case Provenance::Mnist:
        return "mnist";
    }
    return "?";
}

Provenance parse_provenance(const std::string& name)
{
    for (auto p : {Provenance::Synthetic, Provenance::Wine, Provenance::Mnist}) {
        if (provenance_name(p) == name) {
            return p;
        }
    }
    throw std::invalid_argument("unknown dataset '" + name + "' (expected synthetic, wine or mnist)");
}

void Dataset::validate() const
{
    if (features.size() != labels.size() * n_features) {
        throw std::invalid_argument("feature matrix does not match label count");
    }
    if (image_side != 0 && std::size_t(image_side) * image_side != n_features) {
        throw std::invalid_argument("image side does not match feature count");
    }
    std::set<std::size_t> seen;
    for (const auto* split : {&train, &test}) {
        for (std::size_t i : *split) {
            if (i >= size() || !seen.insert(i).second) {
                throw std::invalid_argument("train/test indices out of range or overlapping");
            }
        }
    }
    for (int y : labels) {
        if (y < 0 || y >= n_classes) {
            throw std::invalid_argument("label " + std::to_string(y) + " outside [0, " + std::to_string(n_classes) + ")");
        }
    }
    for (double v : features) {
        if (!(v >= 0.0 && v <= kPi)) {
            throw std::invalid_argument("feature value outside [0, pi]");
        }
    }
}

void rescale_to_angles(Dataset& ds)
{
    const std::size_t d = ds.n_features;
    for (std::size_t j = 0; j < d; ++j) {
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i : ds.train) {
            lo = std::min(lo, ds.features[i * d + j]);
            hi = std::max(hi, ds.features[i * d + j]);
        }
        const double span = hi - lo;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            double& v = ds.features[i * d + j];
            v = span > 0.0 ? std::clamp((v - lo) / span * kPi, 0.0, kPi) : 0.0;
        }
    }
}

Dataset randomize_labels(const Dataset& ds, double fraction, std::uint64_t seed)
{
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("label randomization fraction must lie in [0, 1]");
    }
    Dataset out = ds;
    if (fraction == 0.0) {
        return out;
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> chosen = ds.train;
    for (std::size_t i = chosen.size(); i > 1; --i) {
        std::swap(chosen[i - 1], chosen[rng() % i]);
    }
    chosen.resize(static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.train.size()))));
    for (std::size_t i : chosen) {
        out.labels[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(ds.n_classes));
    }
    out.label_noise_seed = seed;
    return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (std::size_t j = 0; j < ds.n_features; ++j) {
        out << 'x' << j << ',';
    }
    out << "label\n";
    std::vector<std::size_t> order = ds.train;
    order.insert(order.end(), ds.test.begin(), ds.test.end());
    for (std::size_t i : order) {
        for (double v : ds.row(i)) {
            out << format_double(v) << ',';
        }
        out << ds.labels[i] << '\n';
    }
    if (!out) {
        throw std::runtime_error("write to " + path.string() + " failed");
    }
}

Dataset read_csv(const std::filesystem::path& path, Provenance provenance)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.string() + ": empty file");
    }
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < 2 || !line.ends_with("label")) {
        throw std::runtime_error(path.string() + ": header must name features then 'label'");
    }
    Dataset ds;
    ds.provenance = provenance;
    ds.n_features = columns - 1;
    int max_label = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t j = 0; j < columns; ++j) {
            const char* stop = std::find(p, end, ',');
            if ((j + 1 < columns) == (stop == end)) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                         std::to_string(columns) + " fields");
            }
            std::from_chars_result res{};
            if (j + 1 < columns) {
                double v = 0.0;
                res = std::from_chars(p, stop, v);
                ds.features.push_back(v);
            } else {
                int y = 0;
                res = std::from_chars(p, stop, y);
                ds.labels.push_back(y);
                max_label = std::max(max_label, y);
            }
            if (res.ec != std::errc{} || res.ptr != stop) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed field " +
                                         std::to_string(j + 1));
            }
            p = stop + 1;
        }
    }
    const std::size_t n = ds.labels.size();
    if (n == 0 || n % 2 != 0) {
        throw std::runtime_error(path.string() + ": expected an even, non-zero number of rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
        (i < n / 2 ? ds.train : ds.test).push_back(i);
    }
    switch (provenance) {
    case Provenance::Mnist:
        ds.n_classes = 10;
        ds.image_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(ds.n_features))));
        break;
    case Provenance::Wine:
        ds.n_classes = 2;
        break;
    case Provenance::Synthetic:
        ds.n_classes = std::max(2, max_label + 1);
        break;
    }
    ds.validate();
    return ds;
}

} // namespace qnnbench::data
