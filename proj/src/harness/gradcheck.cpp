#include "qnnbench/harness/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qnnbench/circuit/builders.hpp"
#include "qnnbench/common.hpp"
#include "qnnbench/grad/gradients.hpp"
#include "qnnbench/grad/metric.hpp"
#include "qnnbench/sim/observable.hpp"

namespace qnnbench::harness {

namespace {

using circuit::ParameterizedCircuit;

std::vector<double> draw(std::mt19937_64& rng, int n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) {
        x = u(rng);
    }
    return v;
}

double value(const ParameterizedCircuit& c, const std::vector<double>& x, const std::vector<double>& theta,
             const sim::Observable& obs)
{
    return sim::expectation(circuit::bind_and_run(c, x, theta), obs);
}

GradcheckCase check_circuit(const std::string& name, const ParameterizedCircuit& c, std::mt19937_64& rng, int draws,
                            double step)
{
    // Z on qubit 0 plus an X/Y pair so every qubit's parameters matter
    const sim::Observable obs =
        c.n_qubits() >= 3 ? sim::Observable({{1.0, {{0, sim::Pauli::Z}}}, {0.5, {{1, sim::Pauli::X}, {2, sim::Pauli::Y}}}})
                          : sim::Observable::pauli_z(0);
    GradcheckCase out;
    out.circuit = name;
    out.draws = draws;
    for (int d = 0; d < draws; ++d) {
        const auto x = draw(rng, c.n_features(), 0.0, kPi);
        auto theta = draw(rng, c.n_params(), 0.0, 2 * kPi);
        const auto g = grad::shift_gradient(c, x, theta, obs);
        for (int j = 0; j < c.n_params(); ++j) {
            const double keep = theta[j];
            theta[j] = keep + step;
            const double plus = value(c, x, theta, obs);
            theta[j] = keep - step;
            const double minus = value(c, x, theta, obs);
            theta[j] = keep;
            const double fd = (plus - minus) / (2 * step);
            out.max_rel_error = std::max(out.max_rel_error, std::abs(g[j] - fd) / std::max(std::abs(fd), 1e-2));
        }
        if (d < 3) {
            for (double alpha : {kPi / 3, 0.7, 2.0}) {
                const auto ga = grad::shift_gradient(c, x, theta, obs, {alpha});
                for (int j = 0; j < c.n_params(); ++j) {
                    out.max_alpha_spread = std::max(out.max_alpha_spread, std::abs(ga[j] - g[j]));
                }
            }
            const auto adj = grad::adjoint_gradient(c, x, theta, obs).gradient;
            for (int j = 0; j < c.n_params(); ++j) {
                out.max_adjoint_diff = std::max(out.max_adjoint_diff, std::abs(adj[j] - g[j]));
            }
        }
    }
    return out;
}

ParameterizedCircuit single_rotation(sim::GateKind kind)
{
    ParameterizedCircuit c(1, 0, 1);
    c.add(kind, {0}, {circuit::AngleBinding::param(0)});
    return c;
}

} // namespace

double GradcheckReport::max_rel_error() const
{
    double m = 0.0;
    for (const auto& c : cases) {
        m = std::max(m, c.max_rel_error);
    }
    return m;
}

bool GradcheckReport::passed() const
{
    for (const auto& c : cases) {
        if (!(c.max_rel_error < 1e-5 && c.max_alpha_spread < 1e-9 && c.max_adjoint_diff < 1e-9)) {
            return false;
        }
    }
    return std::abs(qgt_single_ry - 0.25) < 1e-10 && std::abs(qgt_rz_on_zero) < 1e-10 &&
           max_metric_asymmetry < 1e-12 && min_metric_eigenvalue >= -1e-8;
}

std::string GradcheckReport::to_text() const
{
    std::string s;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %6s %14s %14s %14s\n", "circuit", "draws", "max_rel_err", "alpha_spread",
                  "adjoint_diff");
    s += line;
    for (const auto& c : cases) {
        std::snprintf(line, sizeof line, "%-12s %6d %14.3e %14.3e %14.3e\n", c.circuit.c_str(), c.draws, c.max_rel_error,
                      c.max_alpha_spread, c.max_adjoint_diff);
        s += line;
    }
    std::snprintf(line, sizeof line,
                  "qgt single RY       %.12f (expect 0.25)\n"
                  "qgt RZ on |0>       %.12f (expect 0)\n"
                  "metric asymmetry    %.3e\n"
                  "metric min eigen    %.3e\n"
                  "max relative error  %.3e\n",
                  qgt_single_ry, qgt_rz_on_zero, max_metric_asymmetry, min_metric_eigenvalue, max_rel_error());
    s += line;
    s += passed() ? "PASS\n" : "FAIL\n";
    return s;
}

GradcheckReport run_gradcheck(std::uint64_t seed, const std::string& arch, int draws, double step)
{
    if (arch != "all" && arch != "qnnn" && arch != "qenn" && arch != "qcnn") {
        throw std::invalid_argument("unknown architecture '" + arch + "' (all, qnnn, qenn, qcnn)");
    }
    if (draws < 1) {
        throw std::invalid_argument("draws must be positive");
    }
    std::mt19937_64 rng(seed);
    GradcheckReport report;
    std::vector<std::pair<std::string, ParameterizedCircuit>> circuits;
    if (arch == "all" || arch == "qnnn") {
        circuits.emplace_back("qnnn(4,2)", circuit::build_qnnn(4, 2));
        circuits.emplace_back("qnnn(6,2)", circuit::build_qnnn(6, 2));
    }
    if (arch == "all" || arch == "qenn") {
        circuits.emplace_back("qenn(5,2)", circuit::build_qenn(5, 2));
        circuits.emplace_back("qenn(6,2)", circuit::build_qenn(6, 2));
    }
    if (arch == "all" || arch == "qcnn") {
        circuits.emplace_back("qcnn-kernel", circuit::build_qcnn_kernel());
    }
    for (const auto& [name, c] : circuits) {
        report.cases.push_back(check_circuit(name, c, rng, draws, step));
    }

    report.qgt_single_ry =
        grad::quantum_geometric_tensor(single_rotation(sim::GateKind::RY), {}, draw(rng, 1, 0, 2 * kPi)).g(0, 0);
    report.qgt_rz_on_zero =
        grad::quantum_geometric_tensor(single_rotation(sim::GateKind::RZ), {}, draw(rng, 1, 0, 2 * kPi)).g(0, 0);
    report.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& [name, c] : circuits) {
        for (int d = 0; d < 3; ++d) {
            const auto g = grad::quantum_geometric_tensor(c, draw(rng, c.n_features(), 0, kPi),
                                                          draw(rng, c.n_params(), 0, 2 * kPi))
                               .g;
            report.max_metric_asymmetry = std::max(report.max_metric_asymmetry, (g - g.transpose()).cwiseAbs().maxCoeff());
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
            report.min_metric_eigenvalue = std::min(report.min_metric_eigenvalue, eig.eigenvalues().minCoeff());
        }
    }
    return report;
}

} // namespace qnnbench::harness
