#include "qnnbench/circuit/circuit.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qnnbench/circuit/program.hpp"
#include "qnnbench/sim/simulator.hpp"

namespace qnnbench::circuit {

double AngleBinding::resolve(std::span<const double> features, std::span<const double> params) const
{
    switch (kind) {
    case Kind::Constant: return value;
    case Kind::Feature: return value * features[index];
    case Kind::Param: return params[index];
    }
    return 0.0;
}

ParameterizedCircuit::ParameterizedCircuit(int n_qubits, int n_features, int n_params)
    : n_qubits_(n_qubits), n_features_(n_features), n_params_(n_params)
{
    if (n_qubits < 1 || n_qubits > sim::kMaxQubits || n_features < 0 || n_params < 0) {
        throw std::invalid_argument("ParameterizedCircuit: invalid dimensions");
    }
}

void ParameterizedCircuit::add(sim::GateKind kind, std::vector<int> qubits, std::vector<AngleBinding> angles)
{
    const std::vector<double> probe(angles.size(), 0.0);
    sim::validate_gate(n_qubits_, kind, qubits, probe);
    for (const AngleBinding& b : angles) {
        if (b.kind == AngleBinding::Kind::Feature && (b.index < 0 || b.index >= n_features_)) {
            throw std::invalid_argument("feature index " + std::to_string(b.index) + " out of range");
        }
        if (b.kind == AngleBinding::Kind::Param && (b.index < 0 || b.index >= n_params_)) {
            throw std::invalid_argument("parameter index " + std::to_string(b.index) + " out of range");
        }
    }
    ops_.push_back({kind, std::move(qubits), std::move(angles)});
}

void ParameterizedCircuit::begin_layer()
{
    layer_boundaries_.push_back(ops_.size());
}

void ParameterizedCircuit::validate() const
{
    std::vector<bool> used(n_params_, false);
    for (const CircuitOp& op : ops_) {
        for (const AngleBinding& b : op.angles) {
            if (b.kind == AngleBinding::Kind::Param) {
                used[b.index] = true;
            }
        }
    }
    for (int j = 0; j < n_params_; ++j) {
        if (!used[j]) {
            throw std::invalid_argument("parameter t" + std::to_string(j) + " is never used");
        }
    }
}

void ParameterizedCircuit::check_inputs(std::span<const double> features, std::span<const double> params) const
{
    if (static_cast<int>(features.size()) != n_features_) {
        throw std::invalid_argument("expected " + std::to_string(n_features_) + " features, got " +
                                    std::to_string(features.size()));
    }
    if (static_cast<int>(params.size()) != n_params_) {
        throw std::invalid_argument("expected " + std::to_string(n_params_) + " parameters, got " +
                                    std::to_string(params.size()));
    }
}

sim::StateVector bind_and_run(const ParameterizedCircuit& circuit, std::span<const double> features,
                              std::span<const double> params)
{
    sim::StateVector state(circuit.n_qubits());
    run(fuse(compile(circuit, features, params)), state);
    return state;
}

namespace {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_binding(const AngleBinding& b)
{
    switch (b.kind) {
    case AngleBinding::Kind::Param: return "t" + std::to_string(b.index);
    case AngleBinding::Kind::Feature:
        return "x" + std::to_string(b.index) + (b.value == 1.0 ? "" : "*" + format_double(b.value));
    case AngleBinding::Kind::Constant: return format_double(b.value);
    }
    return {};
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

int parse_int(const std::string& s, int line)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("circuit text line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, int line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("circuit text line " + std::to_string(line) + ": bad number '" + s + "'");
}

AngleBinding parse_binding(const std::string& s, int line)
{
    if (!s.empty() && s[0] == 't') {
        return AngleBinding::param(parse_int(s.substr(1), line));
    }
    if (!s.empty() && s[0] == 'x') {
        const auto star = s.find('*');
        const int idx = parse_int(s.substr(1, star == std::string::npos ? std::string::npos : star - 1), line);
        return AngleBinding::feature(idx, star == std::string::npos ? 1.0 : parse_double(s.substr(star + 1), line));
    }
    return AngleBinding::constant(parse_double(s, line));
}

} // namespace

std::string to_text(const ParameterizedCircuit& circuit)
{
    std::ostringstream out;
    out << "qubits " << circuit.n_qubits() << "\n";
    out << "features " << circuit.n_features() << "\n";
    out << "params " << circuit.n_params() << "\n";
    const auto& bounds = circuit.layer_boundaries();
    std::size_t next_bound = 0;
    for (std::size_t i = 0; i <= circuit.ops().size(); ++i) {
        while (next_bound < bounds.size() && bounds[next_bound] == i) {
            out << "layer\n";
            ++next_bound;
        }
        if (i == circuit.ops().size()) {
            break;
        }
        const CircuitOp& op = circuit.ops()[i];
        out << sim::gate_name(op.kind) << ' ';
        for (std::size_t k = 0; k < op.qubits.size(); ++k) {
            out << (k ? "," : "") << op.qubits[k];
        }
        for (std::size_t k = 0; k < op.angles.size(); ++k) {
            out << (k ? "," : " ") << format_binding(op.angles[k]);
        }
        out << "\n";
    }
    return out.str();
}

ParameterizedCircuit from_text(std::string_view text)
{
    int header[3] = {-1, -1, -1};
    const char* header_names[3] = {"qubits", "features", "params"};
    std::optional<ParameterizedCircuit> circuit;
    int line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        std::istringstream line(raw);
        std::string word;
        if (!(line >> word) || word[0] == '#') {
            continue;
        }
        if (!circuit) {
            int slot = -1;
            for (int k = 0; k < 3; ++k) {
                if (word == header_names[k]) {
                    slot = k;
                }
            }
            if (slot < 0) {
                throw std::invalid_argument("circuit text line " + std::to_string(line_no) +
                                            ": expected qubits/features/params header, got '" + word + "'");
            }
            std::string value;
            line >> value;
            header[slot] = parse_int(value, line_no);
            if (header[0] >= 0 && header[1] >= 0 && header[2] >= 0) {
                circuit.emplace(header[0], header[1], header[2]);
            }
            continue;
        }
        if (word == "layer") {
            circuit->begin_layer();
            continue;
        }
        const auto kind = sim::parse_gate_name(word);
        if (!kind) {
            throw std::invalid_argument("circuit text line " + std::to_string(line_no) + ": unknown gate '" + word + "'");
        }
        std::string qubit_field, angle_field;
        line >> qubit_field >> angle_field;
        std::vector<int> qubits;
        for (const std::string& q : split(qubit_field, ',')) {
            qubits.push_back(parse_int(q, line_no));
        }
        std::vector<AngleBinding> angles;
        if (!angle_field.empty()) {
            for (const std::string& a : split(angle_field, ',')) {
                angles.push_back(parse_binding(a, line_no));
            }
        }
        try {
            circuit->add(*kind, std::move(qubits), std::move(angles));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("circuit text line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!circuit) {
        throw std::invalid_argument("circuit text: missing qubits/features/params header");
    }
    return *circuit;
}

} // namespace qnnbench::circuit
