#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/data/dataset.hpp"

using namespace qnnbench;
using namespace qnnbench::data;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = QNNBENCH_TEST_DATA_DIR;

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "qnnbench_test_data";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> be32(std::uint32_t v)
{
    return {std::uint8_t(v >> 24), std::uint8_t(v >> 16), std::uint8_t(v >> 8), std::uint8_t(v)};
}

std::vector<std::uint8_t> idx_images(std::uint32_t magic, std::uint32_t count, std::uint32_t rows, std::uint32_t cols,
                                     std::size_t pixel_bytes, std::uint8_t fill)
{
    std::vector<std::uint8_t> b;
    for (auto v : {magic, count, rows, cols}) {
        const auto w = be32(v);
        b.insert(b.end(), w.begin(), w.end());
    }
    b.insert(b.end(), pixel_bytes, fill);
    return b;
}

} // namespace

TEST_CASE("synthetic generator")
{
    SyntheticOptions opts;
    opts.seed = 5;
    const Dataset ds = generate_synthetic(opts);
    CHECK(ds.size() == 400);
    CHECK(ds.n_features == 16);
    CHECK(ds.train.size() == 200);
    CHECK(ds.test.size() == 200);
    CHECK_NOTHROW(ds.validate());
    for (const auto* split : {&ds.train, &ds.test}) {
        const auto ones = std::count_if(split->begin(), split->end(), [&](std::size_t i) { return ds.labels[i] == 1; });
        CHECK(ones == 100);
    }

    CHECK(generate_synthetic(opts) == ds);
    opts.seed = 6;
    opts.n_per_class = 4;
    CHECK(generate_synthetic(opts).features != std::vector<double>(ds.features.begin(), ds.features.begin() + 8 * 16));
}

TEST_CASE("synthetic labels are reproduced by the generator circuit")
{
    SyntheticOptions opts;
    opts.seed = 11;
    opts.n_features = 6;
    opts.n_per_class = 40;
    const Dataset ds = generate_synthetic(opts);
    const auto gen = circuit::build_qenn(6, opts.generator_layers);
    const auto theta = synthetic_generator_params(opts);
    const auto z0 = sim::Observable::pauli_z(0);
    int correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto x = ds.row(i);
        const double f = testing::circuit_expectation(gen, {x.begin(), x.end()}, theta, z0);
        correct += (f > 0.0 ? 1 : 0) == ds.labels[i];
    }
    CHECK(correct == static_cast<int>(ds.size()));
}

TEST_CASE("synthetic sampling reports exhaustion")
{
    SyntheticOptions opts;
    opts.n_features = 4;
    opts.seed = 2; // this generator never yields a positive readout
    opts.max_draws = 2000;
    CHECK_THROWS_WITH_AS(generate_synthetic(opts), doctest::Contains("class counts"), std::runtime_error);
}

TEST_CASE("Wine loader")
{
    const Dataset ds = load_wine(kDataDir / "wine.data", 3);
    CHECK(ds.size() == 130);
    CHECK(ds.n_features == 13);
    CHECK(ds.n_classes == 2);
    CHECK(ds.train.size() == 65);
    CHECK(ds.test.size() == 65);
    CHECK_NOTHROW(ds.validate());

    // train-split columns span exactly [0, pi]
    for (std::size_t j = 0; j < 13; ++j) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t i : ds.train) {
            lo = std::min(lo, ds.features[i * 13 + j]);
            hi = std::max(hi, ds.features[i * 13 + j]);
        }
        CHECK(lo == 0.0);
        CHECK(hi == doctest::Approx(kPi).epsilon(1e-15));
    }
    // 59 of class 1 and 71 of class 2 split within one of half each
    auto count = [&](const std::vector<std::size_t>& split, int y) {
        return std::count_if(split.begin(), split.end(), [&](std::size_t i) { return ds.labels[i] == y; });
    };
    CHECK(count(ds.train, 0) + count(ds.test, 0) == 59);
    CHECK(std::abs(count(ds.train, 0) - count(ds.test, 0)) <= 1);
    CHECK(std::abs(count(ds.train, 1) - count(ds.test, 1)) <= 1);

    CHECK(load_wine(kDataDir / "wine.data", 3) == ds);
    CHECK(load_wine(kDataDir / "wine.data", 4) != ds);
}

TEST_CASE("Wine loader errors")
{
    CHECK_THROWS_WITH_AS(load_wine(scratch("absent.data"), 0), doctest::Contains("absent.data"), std::runtime_error);
    const auto bad = scratch("bad.data");
    {
        std::ofstream out(bad);
        out << "1,14.23,1.71,2.43,15.6,127,2.8,3.06,0.28,2.29,5.64,1.04,3.92,1065\n";
        out << "2,12.3,oops,2.43,15.6,127,2.8,3.06,0.28,2.29,5.64,1.04,3.92,1065\n";
    }
    CHECK_THROWS_WITH_AS(load_wine(bad, 0), doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("bilinear resize")
{
    std::vector<double> black(28 * 28, 0.0);
    for (double v : resize_bilinear(black, 28, 28, 10, 10)) {
        CHECK(v == 0.0);
    }
    std::vector<double> grey(28 * 28, 0.37);
    for (double v : resize_bilinear(grey, 28, 28, 10, 10)) {
        CHECK(std::abs(v - 0.37) < 1e-12);
    }
    // a linear ramp is reproduced exactly away from the clamped border
    std::vector<double> ramp(8 * 8);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            ramp[r * 8 + c] = 2.0 * r + c;
        }
    }
    const auto half = resize_bilinear(ramp, 8, 8, 4, 4);
    // output (1, 2) samples source (2.5, 4.5)
    CHECK(half[1 * 4 + 2] == doctest::Approx(2.0 * 2.5 + 4.5).epsilon(1e-14));
    CHECK(resize_bilinear(ramp, 8, 8, 8, 8) == ramp);
    CHECK_THROWS_AS(resize_bilinear(ramp, 8, 7, 4, 4), std::invalid_argument);
}

TEST_CASE("MNIST loader")
{
    MnistOptions opts;
    opts.seed = 1;
    const Dataset ds = load_mnist(kDataDir / "train-images-idx3-ubyte", kDataDir / "train-labels-idx1-ubyte", opts);
    CHECK(ds.size() == 4000);
    CHECK(ds.n_features == 100);
    CHECK(ds.image_side == 10);
    CHECK(ds.n_classes == 10);
    CHECK_NOTHROW(ds.validate());
    std::set<int> classes(ds.labels.begin(), ds.labels.end());
    CHECK(classes.size() == 10);
    CHECK(load_mnist(kDataDir / "train-images-idx3-ubyte", kDataDir / "train-labels-idx1-ubyte", opts) == ds);
}

TEST_CASE("IDX parsing")
{
    const auto images = scratch("img.idx");
    const auto labels = scratch("lab.idx");
    write_bytes(images, idx_images(2051, 2, 28, 28, 2 * 28 * 28, 0));
    auto lab = be32(2049);
    for (auto b : be32(2)) {
        lab.push_back(b);
    }
    lab.push_back(3);
    lab.push_back(7);
    write_bytes(labels, lab);

    const auto img = read_idx_images(images);
    CHECK(img.count() == 2);
    CHECK(read_idx_labels(labels) == std::vector<std::uint8_t>{3, 7});

    MnistOptions opts;
    opts.n_train = 1;
    opts.n_test = 1;
    const Dataset ds = load_mnist(images, labels, opts);
    for (double v : ds.features) {
        CHECK(v == 0.0);
    }

    write_bytes(images, idx_images(2049, 2, 28, 28, 2 * 28 * 28, 0));
    CHECK_THROWS_WITH_AS(read_idx_images(images), doctest::Contains("magic"), std::runtime_error);
    write_bytes(images, idx_images(2051, 2, 28, 28, 28 * 28 + 5, 0));
    CHECK_THROWS_WITH_AS(read_idx_images(images), doctest::Contains("truncated"), std::runtime_error);
    write_bytes(images, {0, 0, 8});
    CHECK_THROWS_WITH_AS(read_idx_images(images), doctest::Contains("truncated"), std::runtime_error);
    CHECK_THROWS_AS(read_idx_labels(images), std::runtime_error);
}

TEST_CASE("label randomization")
{
    SyntheticOptions opts;
    opts.seed = 1;
    opts.n_features = 4;
    const Dataset ds = generate_synthetic(opts);

    CHECK(randomize_labels(ds, 0.0, 9).labels == ds.labels);

    const Dataset r = randomize_labels(ds, 1.0, 9);
    CHECK(r.label_noise_seed == std::optional<std::uint64_t>{9});
    for (std::size_t i : ds.test) {
        CHECK(r.labels[i] == ds.labels[i]);
    }
    const auto ones = std::count_if(ds.train.begin(), ds.train.end(), [&](std::size_t i) { return r.labels[i] == 1; });
    // Binomial(200, 1/2): mean 100, sd sqrt(50)
    CHECK(std::abs(static_cast<double>(ones) - 100.0) <= 3.0 * std::sqrt(50.0));
    CHECK(r.labels != ds.labels);
    CHECK(randomize_labels(ds, 1.0, 9) == r);
    CHECK(ds.label_noise_seed == std::nullopt);

    const Dataset half = randomize_labels(ds, 0.5, 4);
    std::size_t touched_test = 0;
    for (std::size_t i : ds.test) {
        touched_test += half.labels[i] != ds.labels[i];
    }
    CHECK(touched_test == 0);
    CHECK_THROWS_AS(randomize_labels(ds, 1.5, 1), std::invalid_argument);
}

TEST_CASE("CSV round trip is bit-exact")
{
    SyntheticOptions opts;
    opts.seed = 8;
    opts.n_features = 5;
    opts.n_per_class = 20;
    const Dataset ds = generate_synthetic(opts);
    const auto path = scratch("synthetic.csv");
    write_csv(ds, path);
    const Dataset back = read_csv(path);
    CHECK(back == ds);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x0,x1,x2,x3,x4,label");

    const auto path2 = scratch("synthetic2.csv");
    write_csv(back, path2);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    CHECK(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));

    const Dataset wine = load_wine(kDataDir / "wine.data", 1);
    write_csv(wine, path);
    CHECK(read_csv(path, Provenance::Wine) == wine);

    {
        std::ofstream out(path);
        out << "x0,x1,label\n0.5,1.0,1\n0.5,zz,0\n";
    }
    CHECK_THROWS_WITH_AS(read_csv(path), doctest::Contains(":3:"), std::runtime_error);
}
