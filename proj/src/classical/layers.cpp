#include "qnnbench/classical/layers.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace qnnbench::classical {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMat = Eigen::Map<const RowMajor>;
using Mat = Eigen::Map<RowMajor>;
using ConstVec = Eigen::Map<const Eigen::VectorXd>;
using Vec = Eigen::Map<Eigen::VectorXd>;

} // namespace

std::size_t DenseStack::param_count() const
{
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        n += widths[l] * widths[l + 1] + widths[l + 1];
    }
    return n;
}

std::vector<std::vector<double>> DenseStack::forward(std::span<const double> p, std::span<const double> x) const
{
    if (x.size() != input_width()) {
        throw std::invalid_argument("input width " + std::to_string(x.size()) + ", network expects " +
                                    std::to_string(input_width()));
    }
    std::vector<std::vector<double>> acts{std::vector<double>(x.begin(), x.end())};
    std::size_t off = 0;
    const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t in = widths[l], out = widths[l + 1];
        const ConstMat w(p.data() + off, idx(out), idx(in));
        const ConstVec b(p.data() + off + in * out, idx(out));
        off += in * out + out;
        std::vector<double> y(out);
        Vec(y.data(), idx(out)).noalias() = w * ConstVec(acts.back().data(), idx(in)) + b;
        if (l + 2 < widths.size()) {
            for (double& v : y) {
                v = v > 0.0 ? v : 0.0;
            }
        }
        acts.push_back(std::move(y));
    }
    return acts;
}

std::vector<double> DenseStack::backward(std::span<const double> p, const std::vector<std::vector<double>>& acts,
                                         std::span<const double> dout, std::span<double> dp) const
{
    const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        offsets.push_back(off);
        off += widths[l] * widths[l + 1] + widths[l + 1];
    }
    std::vector<double> delta(dout.begin(), dout.end());
    for (std::size_t l = widths.size() - 1; l-- > 0;) {
        const std::size_t in = widths[l], out = widths[l + 1];
        const ConstMat w(p.data() + offsets[l], idx(out), idx(in));
        Mat dw(dp.data() + offsets[l], idx(out), idx(in));
        Vec db(dp.data() + offsets[l] + in * out, idx(out));
        const ConstVec d(delta.data(), idx(out));
        const ConstVec a(acts[l].data(), idx(in));
        dw.noalias() += d * a.transpose();
        db += d;
        std::vector<double> next(in);
        Vec(next.data(), idx(in)).noalias() = w.transpose() * d;
        if (l > 0) {
            for (std::size_t k = 0; k < in; ++k) {
                if (acts[l][k] <= 0.0) {
                    next[k] = 0.0;
                }
            }
        }
        delta = std::move(next);
    }
    return delta;
}

void DenseStack::initialize(std::span<double> p, std::mt19937_64& rng) const
{
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t n = widths[l] * widths[l + 1] + widths[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (std::size_t k = 0; k < n; ++k) {
            p[off + k] = u(rng);
        }
        off += n;
    }
}

int feature_side(int image_side, int stride)
{
    if (image_side < 2 || stride < 1) {
        throw std::invalid_argument("2x2 windows need an image side >= 2 and stride >= 1");
    }
    return (image_side - 2) / stride + 1;
}

} // namespace qnnbench::classical
