#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "euler.hpp"
#include "flux.hpp"
#include "gen.hpp"
#include "mollifier.hpp"
#include "ofx.hpp"
#include "reflect.hpp"
#include "report.hpp"
#include "sha256.hpp"
#include "spectral.hpp"

namespace fluxdiag {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string resolve(const std::string& out_dir, const std::string& p) {
    if (out_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(out_dir) / p).string();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string req_str(const ordered_json& p, const char* key) {
    if (!p.contains(key))
        throw ValidationError(std::string("missing parameter: ") + key);
    return p.at(key).get<std::string>();
}

double req_num(const ordered_json& p, const char* key) {
    if (!p.contains(key))
        throw ValidationError(std::string("missing parameter: ") + key);
    return p.at(key).get<double>();
}

std::vector<double> num_list(const ordered_json& v) {
    if (v.is_number()) return {v.get<double>()};
    return v.get<std::vector<double>>();
}

std::vector<std::string> str_list(const ordered_json& v) {
    if (v.is_string()) return {v.get<std::string>()};
    return v.get<std::vector<std::string>>();
}

Grid grid_from_params(const ordered_json& p, DomainKind kind) {
    Grid g;
    g.domain.kind = kind;
    std::array<int, 3> N{};
    if (!p.contains("N")) throw ValidationError("missing parameter: N");
    if (p.at("N").is_number()) {
        const int n = p.at("N").get<int>();
        N = {n, n, n};
    } else {
        const auto v = p.at("N").get<std::vector<int>>();
        if (v.size() != 3) throw ValidationError("N must be a scalar or 3-list");
        N = {v[0], v[1], v[2]};
    }
    g.N = N;
    if (p.contains("L")) {
        if (p.at("L").is_number()) {
            const double l = p.at("L").get<double>();
            g.domain.L = {l, l, l};
        } else {
            const auto v = p.at("L").get<std::vector<double>>();
            if (v.size() != 3) throw ValidationError("L must be a scalar or 3-list");
            g.domain.L = {v[0], v[1], v[2]};
        }
    }
    g.validate();
    return g;
}

RoughSpec rough_from_params(const ordered_json& p) {
    RoughSpec spec;
    spec.alpha = req_num(p, "alpha");
    if (p.contains("seed")) spec.seed = p.at("seed").get<std::uint64_t>();
    spec.kmin = p.value("kmin", spec.kmin);
    spec.kmax = p.value("kmax", spec.kmax);
    spec.amplitude = p.value("amplitude", spec.amplitude);
    return spec;
}

// Loads a snapshot list plus trapezoidal time weights. `dt` spaces uniform
// snapshots when no explicit times are given; a single snapshot gets unit
// weight (static-field diagnostics).
void load_series(const ordered_json& p, const std::string& out_dir,
                 std::vector<VelocityField>& fields, std::vector<double>& weights) {
    if (!p.contains("in")) throw ValidationError("missing parameter: in");
    const auto paths = str_list(p.at("in"));
    if (paths.empty()) throw ValidationError("empty input list");
    for (const auto& f : paths) fields.push_back(read_ofx(resolve(out_dir, f)));
    const std::size_t n = fields.size();
    weights.assign(n, 1.0);
    if (n > 1) {
        const double dt = p.value("dt", 1.0);
        if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
        for (std::size_t i = 0; i < n; ++i)
            weights[i] = (i == 0 || i == n - 1) ? dt / 2.0 : dt;
    }
}

std::vector<double> default_shifts(const Grid& g, bool half) {
    const double h = std::max({g.h(0), g.h(1), g.h(2)});
    double lo = h;
    double hi;
    if (half) {
        hi = g.domain.L[2] / 8.0;
    } else {
        hi = std::min({g.domain.box_len(0), g.domain.box_len(1),
                       g.domain.box_len(2)}) / 4.0;
    }
    if (!(hi > lo)) throw ValidationError("grid too coarse for default shifts");
    const int n = 10;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = hi * std::pow(lo / hi, double(i) / (n - 1));
    return out;  // decreasing magnitudes
}

double enstrophy(const VelocityField& u) {
    const SpectralField s = forward(u);
    const Grid& g = u.grid;
    const int n3h = g.N[2] / 2 + 1;
    double acc = 0.0;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                const double k1 = wavenumber(g, 0, i1);
                const double k2 = wavenumber(g, 1, i2);
                const double k3 = wavenumber(g, 2, i3);
                const double k2n = k1 * k1 + k2 * k2 + k3 * k3;
                const double w = herm_weight(g, i3);
                for (int c = 0; c < 3; ++c) acc += w * k2n * std::norm(s.c[c][i]);
            }
    return 0.5 * acc * g.cell_volume();  // same 1/2 convention as energy()
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IOError("write failed: " + path);
}

std::vector<std::string> stage_gen(const ordered_json& p, const std::string& out_dir) {
    const std::string kind = req_str(p, "kind");
    const std::string out = p.value("out", "field.ofx");
    VelocityField u;
    if (kind == "taylor-green") {
        u = gen_taylor_green(grid_from_params(p, DomainKind::Periodic3));
    } else if (kind == "abc") {
        u = gen_abc(grid_from_params(p, DomainKind::Periodic3),
                    p.value("A", 1.0), p.value("B", 1.0), p.value("C", 1.0));
    } else if (kind == "rough") {
        const std::string dom = p.value("domain", "Periodic3");
        u = gen_rough(grid_from_params(p, domain_kind_from_string(dom)),
                      rough_from_params(p));
    } else if (kind == "half") {
        u = gen_halfspace(grid_from_params(p, DomainKind::HalfSlab),
                          rough_from_params(p));
    } else {
        throw ValidationError("unknown gen kind: " + kind);
    }
    write_ofx(resolve(out_dir, out), u);
    return {out};
}

std::vector<std::string> stage_evolve(const ordered_json& p, const std::string& out_dir) {
    const std::string init = p.contains("init") ? req_str(p, "init") : req_str(p, "in");
    const double T = req_num(p, "T");
    const double dt = req_num(p, "dt");
    IntegrateOptions opts;
    opts.stride = int(p.value("stride", double(opts.stride)));
    opts.cfl = p.value("cfl", opts.cfl);
    const std::string snap_dir = p.value("out_dir", "snaps");
    const fs::path dir = resolve(out_dir, snap_dir);
    fs::create_directories(dir);

    const VelocityField u0 = read_ofx(resolve(out_dir, init));
    const SnapshotSeries series = integrate(u0, T, dt, opts);

    std::vector<std::string> outputs;
    std::ostringstream csv;
    csv << "t,energy,enstrophy,top_shell_fraction\n";
    for (std::size_t i = 0; i < series.fields.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%06zu.ofx", i);
        write_ofx((dir / name).string(), series.fields[i]);
        outputs.push_back((fs::path(snap_dir) / name).string());
        csv << fmt17(series.times[i]) << ',' << fmt17(series.energies[i]) << ','
            << fmt17(enstrophy(series.fields[i])) << ','
            << fmt17(top_shell_fraction(series.fields[i])) << '\n';
    }
    const std::string csv_rel = (fs::path(snap_dir) / "energy.csv").string();
    write_text(resolve(out_dir, csv_rel), csv.str());
    outputs.push_back(csv_rel);
    return outputs;
}

std::vector<std::string> stage_mollify(const ordered_json& p, const std::string& out_dir) {
    const VelocityField u = read_ofx(resolve(out_dir, req_str(p, "in")));
    const Mollifier m = build_mollifier(req_num(p, "eps"), u.grid);
    const std::string out = p.value("out", "mollified.ofx");
    write_ofx(resolve(out_dir, out), convolve(u, m));
    return {out};
}

std::vector<std::string> stage_extend(const ordered_json& p, const std::string& out_dir) {
    const VelocityField u = read_ofx(resolve(out_dir, req_str(p, "in")));
    bool warned = false;
    const VelocityField e = extend(u, &warned);
    if (warned)
        throw NumericalError("extend: boundary trace u3 exceeds trace_tol; "
                             "the extension is discontinuous");
    const std::string out = p.value("out", "extended.ofx");
    write_ofx(resolve(out_dir, out), e);
    return {out};
}

std::vector<std::string> stage_restrict(const ordered_json& p, const std::string& out_dir) {
    const VelocityField u = read_ofx(resolve(out_dir, req_str(p, "in")));
    const std::string out = p.value("out", "restricted.ofx");
    write_ofx(resolve(out_dir, out), restrict_half(u));
    return {out};
}

std::vector<std::string> stage_flux(const ordered_json& p, const std::string& out_dir) {
    std::vector<VelocityField> fields;
    std::vector<double> weights;
    load_series(p, out_dir, fields, weights);
    if (!p.contains("eps_list")) throw ValidationError("missing parameter: eps_list");
    std::vector<double> eps = num_list(p.at("eps_list"));
    std::sort(eps.rbegin(), eps.rend());
    const bool direct = p.value("direct", true);

    SnapshotSeries series;
    series.fields = std::move(fields);
    series.dt = p.value("dt", 1.0);
    for (std::size_t i = 0; i < series.fields.size(); ++i)
        series.times.push_back(double(i) * series.dt);
    FluxReport rep = dissipation_estimate(series, eps, direct);
    const std::string out = p.value("report", "flux.json");
    write_text(resolve(out_dir, out), rep.to_json());
    return {out};
}

std::vector<std::string> stage_structfn(const ordered_json& p, const std::string& out_dir) {
    const VelocityField u = read_ofx(resolve(out_dir, req_str(p, "in")));
    if (!p.contains("shifts")) throw ValidationError("missing parameter: shifts");
    const std::vector<double> shifts = num_list(p.at("shifts"));
    const bool half = u.grid.domain.kind == DomainKind::HalfSlab;
    const auto dirs = shift_directions();
    std::ostringstream csv;
    csv << "shift_or_eps,direction_id,value\n";
    for (double s : shifts)
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const Vec3 y{s * dirs[d][0], s * dirs[d][1], s * dirs[d][2]};
            const double v = half ? structure_fn_half(u, y) : structure_fn(u, y);
            csv << fmt17(s) << ',' << d << ',' << fmt17(v) << '\n';
        }
    const std::string out = p.value("report", "s3.csv");
    write_text(resolve(out_dir, out), csv.str());
    return {out};
}

std::vector<std::string> stage_criterion(const ordered_json& p, const std::string& out_dir) {
    const std::string mode = req_str(p, "mode");
    std::vector<VelocityField> fields;
    std::vector<double> weights;
    load_series(p, out_dir, fields, weights);
    const Grid& g = fields.front().grid;

    CriterionReport rep;
    if (mode == "s" || mode == "half") {
        std::vector<double> shifts =
            p.contains("shifts") ? num_list(p.at("shifts"))
                                 : default_shifts(g, mode == "half");
        std::sort(shifts.rbegin(), shifts.rend());
        rep = (mode == "s") ? s_condition(fields, weights, shifts)
                            : halfspace_criterion(fields, weights, shifts);
    } else if (mode == "besov") {
        if (fields.size() != 1)
            throw ValidationError("criterion --mode besov takes a single field");
        const double delta = req_num(p, "delta");
        const double lmin = std::min(
            {g.domain.box_len(0), g.domain.box_len(1), g.domain.box_len(2)});
        const double r_max = p.value("r_max", lmin / 4.0);
        const double core = p.value("core", 3.0 * std::max({g.h(0), g.h(1), g.h(2)}));
        double remainder = 0.0;
        const double val = besov_integral(fields.front(), delta, r_max, core, &remainder);
        rep.mode = "besov";
        rep.besov_integral = val;
        rep.besov_remainder = remainder;
        rep.fit_band = {core, r_max};
        if (std::isfinite(remainder) && remainder <= val)
            rep.verdict = "vanishing";
        else if (!std::isfinite(remainder))
            rep.verdict = "non-vanishing";
        else
            rep.verdict = "inconclusive";
    } else {
        throw ValidationError("criterion mode must be s, besov or half");
    }
    const std::string out = p.value("report", "criterion.json");
    write_text(resolve(out_dir, out), rep.to_json());
    if (rep.trace_warning)
        throw NumericalError("half-space criterion: boundary trace hypothesis "
                             "violated (see " + out + ")");
    return {out};
}

std::vector<std::string> stage_modulus(const ordered_json& p, const std::string& out_dir) {
    const VelocityField u = read_ofx(resolve(out_dir, req_str(p, "in")));
    if (!p.contains("radii")) throw ValidationError("missing parameter: radii");
    std::vector<double> radii = num_list(p.at("radii"));
    std::sort(radii.begin(), radii.end());
    const ContinuityModulus w = continuity_modulus(u, radii);
    std::ostringstream csv;
    csv << "shift_or_eps,direction_id,value\n";
    for (std::size_t i = 0; i < w.radii.size(); ++i)
        csv << fmt17(w.radii[i]) << ",0," << fmt17(w.w[i]) << '\n';
    const std::string out = p.value("report", "w.csv");
    write_text(resolve(out_dir, out), csv.str());
    return {out};
}

std::string ofx_descriptor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string line;
    if (in && std::getline(in, line)) return line;
    return "";
}

struct DirLock {
    fs::path path;
    explicit DirLock(const fs::path& dir) : path(dir / ".lock") {
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream probe(path, std::ios::binary | std::ios::app);
        // best-effort single-owner lock: refuse if the file pre-existed
        if (fs::exists(path) && fs::file_size(path) > 0)
            throw ValidationError("output directory is locked: " + path.string());
        std::ofstream(path, std::ios::binary | std::ios::trunc) << "locked\n";
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

}  // namespace

std::vector<std::string> run_stage(const std::string& stage,
                                   const ordered_json& params,
                                   const std::string& out_dir) {
    fs::create_directories(out_dir);
    if (stage == "gen") return stage_gen(params, out_dir);
    if (stage == "evolve") return stage_evolve(params, out_dir);
    if (stage == "mollify") return stage_mollify(params, out_dir);
    if (stage == "extend") return stage_extend(params, out_dir);
    if (stage == "restrict") return stage_restrict(params, out_dir);
    if (stage == "flux") return stage_flux(params, out_dir);
    if (stage == "structfn") return stage_structfn(params, out_dir);
    if (stage == "criterion") return stage_criterion(params, out_dir);
    if (stage == "modulus") return stage_modulus(params, out_dir);
    throw ValidationError("unknown stage: " + stage);
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["schema"] = "FLUXM1";
    j["tool_version"] = tool_version;
    j["config_sha256"] = config_sha256;
    j["grids"] = grids;
    ordered_json st = ordered_json::array();
    for (const auto& s : stages)
        st.push_back({{"stage", s.stage},
                      {"wall_ms", s.wall_ms},
                      {"outputs", s.outputs}});
    j["stages"] = st;
    ordered_json dg = ordered_json::object();
    for (const auto& [f, d] : digests) dg[f] = d;
    j["digests"] = dg;
    return j.dump(2) + "\n";
}

RunManifest run_pipeline(const std::string& config_text,
                         const std::string& out_dir_override) {
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(config_text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    const std::string out_dir =
        !out_dir_override.empty() ? out_dir_override : cfg.value("out_dir", "out");
    DirLock lock{fs::path(out_dir)};

    RunManifest man;
    man.tool_version = kToolVersion;
    man.config_sha256 = Sha256::of(config_text.data(), config_text.size());

    const std::uint64_t seed =
        cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 1;
    for (auto stage_cfg : cfg.value("pipeline", ordered_json::array())) {
        const std::string name = req_str(stage_cfg, "stage");
        // the config-level seed is the default for generator stages
        if (name == "gen" && !stage_cfg.contains("seed"))
            stage_cfg["seed"] = seed;
        const auto t0 = std::chrono::steady_clock::now();
        StageRecord rec;
        rec.stage = name;
        try {
            rec.outputs = run_stage(name, stage_cfg, out_dir);
        } catch (const Error& e) {
            throw Error(e.code, "stage '" + name + "' failed: " + e.what());
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        for (const auto& f : rec.outputs) {
            const std::string full = resolve(out_dir, f);
            man.digests.emplace_back(f, Sha256::of_file(full));
            if (f.size() > 4 && f.substr(f.size() - 4) == ".ofx") {
                const std::string d = ofx_descriptor(full);
                if (!d.empty() &&
                    std::find(man.grids.begin(), man.grids.end(), d) == man.grids.end())
                    man.grids.push_back(d);
            }
        }
        man.stages.push_back(std::move(rec));
    }
    write_text((fs::path(out_dir) / "manifest.json").string(), man.to_json());
    return man;
}

std::string render_reports(const std::vector<std::string>& report_paths,
                           const std::string& csv_path) {
    std::ostringstream out, csv;
    csv << "log_shift_or_eps,log_value\n";
    for (const auto& path : report_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IOError("cannot open report: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        ordered_json probe;
        try {
            probe = ordered_json::parse(text);
        } catch (const std::exception& e) {
            throw IOError("report parse error in " + path + ": " + e.what());
        }
        const std::string type = probe.value("type", "");
        out << "== " << path << " ==\n";
        if (type == "flux") {
            const FluxReport r = FluxReport::from_json(text);
            out << "  eps            J_bilinear";
            if (!r.j_direct.empty()) out << "              J_direct      rel.residual";
            out << "\n";
            for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
                char line[160];
                if (!r.j_direct.empty())
                    std::snprintf(line, sizeof(line), "  %-12.6g %+-14.8g %+-14.8g %-10.3g\n",
                                  r.epsilons[i], r.j_bilinear[i], r.j_direct[i],
                                  r.identity_residuals[i]);
                else
                    std::snprintf(line, sizeof(line), "  %-12.6g %+-14.8g\n",
                                  r.epsilons[i], r.j_bilinear[i]);
                out << line;
                if (r.j_bilinear[i] != 0.0)
                    csv << fmt17(std::log(r.epsilons[i])) << ','
                        << fmt17(std::log(std::abs(r.j_bilinear[i]))) << '\n';
            }
            out << "  fitted |J| decay exponent: " << r.fitted_decay_exponent
                << " (+-" << r.fit_ci95 << " at 95%)\n";
            if (r.d_extrapolated)
                out << "  extrapolated D(u) integral: " << *r.d_extrapolated << "\n";
            if (r.energy_residual)
                out << "  energy-balance residual: " << *r.energy_residual << "\n";
            if (r.hypothesis_warning)
                out << "  WARNING: input was not divergence-free\n";
        } else if (type == "criterion") {
            const CriterionReport r = CriterionReport::from_json(text);
            out << "  mode: " << r.mode << "\n  verdict: " << r.verdict << "\n";
            if (r.mode == "besov") {
                out << "  besov integral: " << (r.besov_integral ? *r.besov_integral : 0.0)
                    << "  (unresolved core: "
                    << (r.besov_remainder ? *r.besov_remainder : 0.0) << ")\n";
            } else {
                out << "  slope: " << r.slope << " (+-" << r.ci95
                    << " at 95%), fit band [" << r.fit_band[0] << ", "
                    << r.fit_band[1] << "]\n";
                for (std::size_t i = 0; i < r.shifts.size(); ++i) {
                    out << "  |y| = " << r.shifts[i]
                        << "   S3/|y| = " << r.s3_over_y[i];
                    if (i < r.strip_values.size())
                        out << "   strip = " << r.strip_values[i];
                    out << "\n";
                    if (r.s3_over_y[i] > 0.0)
                        csv << fmt17(std::log(r.shifts[i])) << ','
                            << fmt17(std::log(r.s3_over_y[i])) << '\n';
                }
                if (!r.strip_values.empty())
                    out << "  strip slope: " << r.strip_slope << "\n";
            }
            if (r.trace_warning)
                out << "  WARNING: boundary-trace hypothesis violated\n";
        } else {
            throw IOError("unknown report type in " + path);
        }
    }
    if (!csv_path.empty()) write_text(csv_path, csv.str());
    return out.str();
}

}  // namespace fluxdiag
