#pragma once
// Diagnostic report types (FLUXR1 JSON schema) shared by flux/reflect/cli.

#include <optional>
#include <string>
#include <vector>

#include "fit.hpp"
#include "types.hpp"

namespace fluxdiag {

inline constexpr const char* kSchemaVersion = "FLUXR1";
inline constexpr const char* kToolVersion = "0.1.0";

struct FluxReport {
    std::vector<double> epsilons;            // decreasing
    std::vector<double> j_direct;            // empty if not computed
    std::vector<double> j_bilinear;
    std::vector<double> identity_residuals;  // empty if j_direct empty
    double fitted_decay_exponent = 0.0;
    double fit_ci95 = 0.0;
    bool hypothesis_warning = false;         // input not divergence-free
    // dissipation_estimate extras
    std::optional<double> d_extrapolated;    // -1/2 * time-integrated J at eps_min
    std::optional<double> energy_residual;   // dE + 1/2 * int J

    std::string to_json() const;
    static FluxReport from_json(const std::string& text);
};

struct CriterionReport {
    std::string mode;                        // "s", "besov" or "half"
    std::vector<double> shifts;              // decreasing magnitudes
    std::vector<std::array<double, 3>> directions;
    std::vector<double> s3_over_y;           // direction-averaged, time-summed
    std::optional<double> besov_integral;
    std::optional<double> besov_remainder;   // unresolved |z| < core contribution
    std::string verdict;                     // vanishing | non-vanishing | inconclusive | conserving
    double slope = 0.0;
    double ci95 = 0.0;
    std::array<double, 2> fit_band{0.0, 0.0};
    // half-space extras
    std::vector<double> strip_values;
    double strip_slope = 0.0;
    bool trace_warning = false;

    std::string to_json() const;
    static CriterionReport from_json(const std::string& text);
};

// Continuity modulus of Lemma 5.2 anchored at the boundary plane x3 = 0.
struct ContinuityModulus {
    std::vector<double> radii;   // increasing
    std::vector<double> w;       // sup increments, non-decreasing
    double fit_slope = 0.0;      // log-log slope (w(0+) trend)
    double fit_ci95 = 0.0;
};

}  // namespace fluxdiag
