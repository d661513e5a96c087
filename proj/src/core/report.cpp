#include "report.hpp"

#include <json.hpp>

namespace fluxdiag {

using nlohmann::ordered_json;

namespace {

ordered_json parse_checked(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw IOError(std::string("report parse error: ") + e.what());
    }
    if (j.value("schema", "") != kSchemaVersion)
        throw IOError("report schema version mismatch: expected " +
                      std::string(kSchemaVersion) + ", got \"" +
                      j.value("schema", "") + "\"");
    return j;
}

}  // namespace

std::string FluxReport::to_json() const {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["type"] = "flux";
    j["epsilons"] = epsilons;
    j["j_bilinear"] = j_bilinear;
    if (!j_direct.empty()) {
        j["j_direct"] = j_direct;
        j["identity_residuals"] = identity_residuals;
    }
    j["fitted_decay_exponent"] = fitted_decay_exponent;
    j["fit_ci95"] = fit_ci95;
    j["hypothesis_warning"] = hypothesis_warning;
    if (d_extrapolated) j["d_extrapolated"] = *d_extrapolated;
    if (energy_residual) j["energy_residual"] = *energy_residual;
    return j.dump(2) + "\n";
}

FluxReport FluxReport::from_json(const std::string& text) {
    const ordered_json j = parse_checked(text);
    FluxReport r;
    r.epsilons = j.at("epsilons").get<std::vector<double>>();
    r.j_bilinear = j.at("j_bilinear").get<std::vector<double>>();
    if (j.contains("j_direct")) {
        r.j_direct = j.at("j_direct").get<std::vector<double>>();
        r.identity_residuals = j.at("identity_residuals").get<std::vector<double>>();
    }
    r.fitted_decay_exponent = j.at("fitted_decay_exponent").get<double>();
    r.fit_ci95 = j.at("fit_ci95").get<double>();
    r.hypothesis_warning = j.value("hypothesis_warning", false);
    if (j.contains("d_extrapolated")) r.d_extrapolated = j.at("d_extrapolated").get<double>();
    if (j.contains("energy_residual")) r.energy_residual = j.at("energy_residual").get<double>();
    return r;
}

std::string CriterionReport::to_json() const {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["type"] = "criterion";
    j["mode"] = mode;
    j["shifts"] = shifts;
    ordered_json dirs = ordered_json::array();
    for (const auto& d : directions) dirs.push_back({d[0], d[1], d[2]});
    j["directions"] = dirs;
    j["s3_over_y"] = s3_over_y;
    if (besov_integral) j["besov_integral"] = *besov_integral;
    if (besov_remainder) j["besov_remainder"] = *besov_remainder;
    j["verdict"] = verdict;
    j["slope"] = slope;
    j["ci95"] = ci95;
    j["fit_band"] = {fit_band[0], fit_band[1]};
    if (!strip_values.empty()) {
        j["strip_values"] = strip_values;
        j["strip_slope"] = strip_slope;
    }
    j["trace_warning"] = trace_warning;
    return j.dump(2) + "\n";
}

CriterionReport CriterionReport::from_json(const std::string& text) {
    const ordered_json j = parse_checked(text);
    CriterionReport r;
    r.mode = j.at("mode").get<std::string>();
    r.shifts = j.at("shifts").get<std::vector<double>>();
    for (const auto& d : j.at("directions"))
        r.directions.push_back({d.at(0).get<double>(), d.at(1).get<double>(),
                                d.at(2).get<double>()});
    r.s3_over_y = j.at("s3_over_y").get<std::vector<double>>();
    if (j.contains("besov_integral")) r.besov_integral = j.at("besov_integral").get<double>();
    if (j.contains("besov_remainder")) r.besov_remainder = j.at("besov_remainder").get<double>();
    r.verdict = j.at("verdict").get<std::string>();
    r.slope = j.at("slope").get<double>();
    r.ci95 = j.at("ci95").get<double>();
    r.fit_band = {j.at("fit_band").at(0).get<double>(), j.at("fit_band").at(1).get<double>()};
    if (j.contains("strip_values")) {
        r.strip_values = j.at("strip_values").get<std::vector<double>>();
        r.strip_slope = j.at("strip_slope").get<double>();
    }
    r.trace_warning = j.value("trace_warning", false);
    return r;
}

}  // namespace fluxdiag
