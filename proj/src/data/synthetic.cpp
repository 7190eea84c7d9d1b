#include <random>
#include <stdexcept>

#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/common.hpp"
#include "qnnbench/data/dataset.hpp"
#include "qnnbench/sim/observable.hpp"

namespace qnnbench::data {

namespace {

constexpr std::uint64_t kGeneratorStream = 0x67656e;
constexpr std::uint64_t kSampleStream = 0x73616d;

} // namespace

std::vector<double> synthetic_generator_params(const SyntheticOptions& opts)
{
    const auto c = circuit::build_qenn(opts.n_features, opts.generator_layers);
    std::mt19937_64 rng(mix_seed(opts.seed, kGeneratorStream));
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    std::vector<double> theta(c.n_params());
    for (double& t : theta) {
        t = u(rng);
    }
    return theta;
}

Dataset generate_synthetic(const SyntheticOptions& opts)
{
    if (opts.n_per_class < 2 || opts.n_per_class % 2 != 0) {
        throw std::invalid_argument("synthetic data needs an even n_per_class >= 2");
    }
    const auto gen = circuit::build_qenn(opts.n_features, opts.generator_layers);
    const auto theta = synthetic_generator_params(opts);
    const auto z0 = sim::Observable::pauli_z(0);
    std::mt19937_64 rng(mix_seed(opts.seed, kSampleStream));
    std::uniform_real_distribution<double> u(0.0, kPi);

    const auto d = static_cast<std::size_t>(opts.n_features);
    const auto per_class = static_cast<std::size_t>(opts.n_per_class);
    std::vector<std::vector<double>> by_class[2];
    std::vector<double> x(d);
    std::size_t draws = 0;
    while (by_class[0].size() < per_class || by_class[1].size() < per_class) {
        if (draws++ == opts.max_draws) {
            throw std::runtime_error("synthetic sampling gave up after " + std::to_string(opts.max_draws) +
                                     " draws with class counts " + std::to_string(by_class[0].size()) + "/" +
                                     std::to_string(by_class[1].size()));
        }
        for (double& v : x) {
            v = u(rng);
        }
        const double f = sim::expectation(circuit::bind_and_run(gen, x, theta), z0);
        auto& bucket = by_class[f > 0.0 ? 1 : 0];
        if (bucket.size() < per_class) {
            bucket.push_back(x);
        }
    }

    Dataset ds;
    ds.provenance = Provenance::Synthetic;
    ds.n_features = d;
    ds.n_classes = 2;
    // Training half of each class first, interleaved by class, then the test halves.
    for (std::size_t half = 0; half < 2; ++half) {
        for (std::size_t k = 0; k < per_class / 2; ++k) {
            for (int y = 0; y < 2; ++y) {
                const auto& row = by_class[y][half * per_class / 2 + k];
                ds.features.insert(ds.features.end(), row.begin(), row.end());
                ds.labels.push_back(y);
                (half == 0 ? ds.train : ds.test).push_back(ds.labels.size() - 1);
            }
        }
    }
    return ds;
}

} // namespace qnnbench::data
