#include <charconv>
#include <fstream>
#include <random>
#include <stdexcept>

#include "qnnbench/data/dataset.hpp"

namespace qnnbench::data {

namespace {

constexpr std::size_t kWineAttributes = 13;

std::vector<double> parse_row(const std::string& line, const std::string& where)
{
    std::vector<double> values;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
        const char* stop = std::find(p, end, ',');
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(p, stop, v);
        if (ec != std::errc{} || ptr != stop) {
            throw std::runtime_error(where + ": malformed field " + std::to_string(values.size() + 1));
        }
        values.push_back(v);
        if (stop == end) {
            break;
        }
        p = stop + 1;
    }
    if (values.size() != kWineAttributes + 1) {
        throw std::runtime_error(where + ": expected 14 fields, found " + std::to_string(values.size()));
    }
    return values;
}

} // namespace

Dataset load_wine(const std::filesystem::path& path, std::uint64_t seed)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open Wine data at " + path.string());
    }
    std::vector<std::vector<double>> by_class[2];
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto values = parse_row(line, path.string() + ":" + std::to_string(line_no));
        const double label = values.front();
        if (label != 1.0 && label != 2.0 && label != 3.0) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": class label must be 1, 2 or 3");
        }
        if (label != 3.0) {
            by_class[label == 1.0 ? 0 : 1].emplace_back(values.begin() + 1, values.end());
        }
    }
    if (by_class[0].size() < 2 || by_class[1].size() < 2) {
        throw std::runtime_error(path.string() + ": too few rows of classes 1 and 2");
    }

    std::mt19937_64 rng(seed);
    std::size_t train_count[2];
    for (int y = 0; y < 2; ++y) {
        auto& rows = by_class[y];
        for (std::size_t i = rows.size(); i > 1; --i) {
            std::swap(rows[i - 1], rows[rng() % i]);
        }
        train_count[y] = rows.size() / 2;
    }
    // Odd totals leave one spare example; give it to the training split of
    // the first odd-sized class so both splits differ by at most one.
    const std::size_t total = by_class[0].size() + by_class[1].size();
    if (train_count[0] + train_count[1] < total / 2) {
        ++train_count[by_class[0].size() % 2 == 1 ? 0 : 1];
    }

    Dataset ds;
    ds.provenance = Provenance::Wine;
    ds.n_features = kWineAttributes;
    ds.n_classes = 2;
    for (int pass = 0; pass < 2; ++pass) {
        for (int y = 0; y < 2; ++y) {
            const auto& rows = by_class[y];
            const std::size_t lo = pass == 0 ? 0 : train_count[y];
            const std::size_t hi = pass == 0 ? train_count[y] : rows.size();
            for (std::size_t i = lo; i < hi; ++i) {
                ds.features.insert(ds.features.end(), rows[i].begin(), rows[i].end());
                ds.labels.push_back(y);
                (pass == 0 ? ds.train : ds.test).push_back(ds.labels.size() - 1);
            }
        }
    }
    rescale_to_angles(ds);
    return ds;
}

} // namespace qnnbench::data
