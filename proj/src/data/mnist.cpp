#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qnnbench/common.hpp"
#include "qnnbench/data/dataset.hpp"

namespace qnnbench::data {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::vector<std::uint8_t> slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open IDX file " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off)
{
    return std::uint32_t(b[off]) << 24 | std::uint32_t(b[off + 1]) << 16 | std::uint32_t(b[off + 2]) << 8 | b[off + 3];
}

void expect_magic(const std::vector<std::uint8_t>& bytes, std::uint32_t magic, std::size_t header,
                  const std::filesystem::path& path)
{
    if (bytes.size() < header) {
        throw std::runtime_error(path.string() + ": truncated IDX header");
    }
    if (be32(bytes, 0) != magic) {
        throw std::runtime_error(path.string() + ": bad IDX magic " + std::to_string(be32(bytes, 0)) + ", expected " +
                                 std::to_string(magic));
    }
}

} // namespace

IdxImages read_idx_images(const std::filesystem::path& path)
{
    const auto bytes = slurp(path);
    expect_magic(bytes, kImageMagic, 16, path);
    IdxImages img;
    const std::size_t count = be32(bytes, 4);
    img.rows = static_cast<int>(be32(bytes, 8));
    img.cols = static_cast<int>(be32(bytes, 12));
    const std::size_t need = count * std::size_t(img.rows) * img.cols;
    if (bytes.size() - 16 < need) {
        throw std::runtime_error(path.string() + ": truncated, header promises " + std::to_string(count) + " images");
    }
    img.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(need));
    return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path)
{
    const auto bytes = slurp(path);
    expect_magic(bytes, kLabelMagic, 8, path);
    const std::size_t count = be32(bytes, 4);
    if (bytes.size() - 8 < count) {
        throw std::runtime_error(path.string() + ": truncated, header promises " + std::to_string(count) + " labels");
    }
    return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count)};
}

std::vector<double> resize_bilinear(std::span<const double> src, int in_h, int in_w, int out_h, int out_w)
{
    if (in_h < 1 || in_w < 1 || out_h < 1 || out_w < 1 || src.size() != std::size_t(in_h) * in_w) {
        throw std::invalid_argument("resize_bilinear: bad image shape");
    }
    // Source coordinate of each output pixel centre, clamped to the edge pixels.
    auto axis = [](int out_i, int in_n, int out_n, int& lo, int& hi, double& frac) {
        const double s = std::clamp((out_i + 0.5) * in_n / out_n - 0.5, 0.0, double(in_n - 1));
        lo = static_cast<int>(std::floor(s));
        hi = std::min(lo + 1, in_n - 1);
        frac = s - lo;
    };
    std::vector<double> out(std::size_t(out_h) * out_w);
    for (int r = 0; r < out_h; ++r) {
        int r0, r1;
        double fr;
        axis(r, in_h, out_h, r0, r1, fr);
        for (int c = 0; c < out_w; ++c) {
            int c0, c1;
            double fc;
            axis(c, in_w, out_w, c0, c1, fc);
            const double top = src[r0 * in_w + c0] + fc * (src[r0 * in_w + c1] - src[r0 * in_w + c0]);
            const double bottom = src[r1 * in_w + c0] + fc * (src[r1 * in_w + c1] - src[r1 * in_w + c0]);
            out[std::size_t(r) * out_w + c] = top + fr * (bottom - top);
        }
    }
    return out;
}

Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels, const MnistOptions& opts)
{
    if (opts.side < 2) {
        throw std::invalid_argument("MNIST resize side must be at least 2");
    }
    const auto img = read_idx_images(images);
    const auto lab = read_idx_labels(labels);
    if (lab.size() != img.count()) {
        throw std::runtime_error("MNIST image and label counts differ (" + std::to_string(img.count()) + " vs " +
                                 std::to_string(lab.size()) + ")");
    }
    const std::size_t wanted = opts.n_train + opts.n_test;
    if (wanted > img.count() || opts.n_train == 0 || opts.n_test == 0) {
        throw std::invalid_argument("requested " + std::to_string(wanted) + " MNIST examples, file holds " +
                                    std::to_string(img.count()));
    }
    std::vector<std::size_t> order(img.count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(opts.seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng() % i]);
    }

    Dataset ds;
    ds.provenance = Provenance::Mnist;
    ds.n_classes = 10;
    ds.image_side = opts.side;
    ds.n_features = std::size_t(opts.side) * opts.side;
    const std::size_t area = std::size_t(img.rows) * img.cols;
    std::vector<double> src(area);
    for (std::size_t k = 0; k < wanted; ++k) {
        const std::size_t i = order[k];
        for (std::size_t p = 0; p < area; ++p) {
            src[p] = img.pixels[i * area + p] / 255.0;
        }
        for (double v : resize_bilinear(src, img.rows, img.cols, opts.side, opts.side)) {
            ds.features.push_back(std::clamp(v * kPi, 0.0, kPi));
        }
        if (lab[i] > 9) {
            throw std::runtime_error(labels.string() + ": label " + std::to_string(lab[i]) + " outside 0..9");
        }
        ds.labels.push_back(lab[i]);
        (k < opts.n_train ? ds.train : ds.test).push_back(k);
    }
    return ds;
}

} // namespace qnnbench::data
