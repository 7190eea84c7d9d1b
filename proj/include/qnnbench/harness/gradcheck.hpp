#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qnnbench::harness {

/// One circuit family checked over random (x, theta) draws.
struct GradcheckCase {
    std::string circuit;
    int draws = 0;
    double max_rel_error = 0.0;  // shift rule vs central differences
    double max_alpha_spread = 0.0; // max |g(pi/2) - g(alpha)| over a few alphas
    double max_adjoint_diff = 0.0; // max |adjoint - shift|
};

struct GradcheckReport {
    std::vector<GradcheckCase> cases;
    double qgt_single_ry = 0.0; // expected 0.25
    double qgt_rz_on_zero = 0.0; // expected 0
    double max_metric_asymmetry = 0.0;
    double min_metric_eigenvalue = 0.0;

    double max_rel_error() const;
    /// Tolerances: relative error 1e-5, alpha spread 1e-9, adjoint 1e-9,
    /// analytic metric values 1e-10, asymmetry 1e-12, eigenvalues >= -1e-8.
    bool passed() const;
    std::string to_text() const;
};

/// Relative error uses max(|finite difference|, 1e-2) as the scale, so
/// near-zero components are judged on absolute error. `arch` is one of
/// all | qnnn | qenn | qcnn.
GradcheckReport run_gradcheck(std::uint64_t seed, const std::string& arch = "all", int draws = 20,
                              double step = 1e-4);

} // namespace qnnbench::harness
