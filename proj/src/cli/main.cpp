// fluxdiag command-line interface. All numerics live behind the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxdiag/fluxdiag.h"

namespace {

using nlohmann::ordered_json;

int fail(int code) {
    std::cerr << "error: " << fd_last_error() << "\n";
    return code;
}

int do_stage(const std::string& stage, const ordered_json& params,
             const std::string& out_dir) {
    char* outputs = nullptr;
    const int rc =
        fd_run_stage(stage.c_str(), params.dump().c_str(), out_dir.c_str(), &outputs);
    if (rc != FD_OK) return fail(rc);
    if (outputs && outputs[0]) std::cout << outputs << "\n";
    fd_string_free(outputs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluxdiag: spectral energy-flux diagnostics for ideal flows"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fd_version()));

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a velocity field");
    std::string g_kind, g_domain = "Periodic3", g_out = "field.ofx";
    int g_N = 64, g_kmin = 1, g_kmax = 0;
    double g_L = 0.0, g_alpha = 0.6, g_amp = 1.0;
    double g_A = 1.0, g_B = 1.0, g_C = 1.0;
    std::uint64_t g_seed = 1;
    gen->add_option("--kind", g_kind, "taylor-green|abc|rough|half")->required();
    gen->add_option("--domain", g_domain, "Periodic3|HybridSlab (rough only)");
    gen->add_option("--N", g_N, "grid resolution per axis");
    gen->add_option("--L", g_L, "box length per axis (default 2*pi)");
    gen->add_option("--alpha", g_alpha, "Hoelder exponent (rough/half)");
    gen->add_option("--seed", g_seed, "RNG seed");
    gen->add_option("--kmin", g_kmin, "lowest excited shell");
    gen->add_option("--kmax", g_kmax, "highest excited shell (0 = N/3)");
    gen->add_option("--amplitude", g_amp, "RMS amplitude");
    gen->add_option("--A", g_A, "ABC coefficient A");
    gen->add_option("--B", g_B, "ABC coefficient B");
    gen->add_option("--C", g_C, "ABC coefficient C");
    gen->add_option("--out", g_out, "output OFX1 file");

    // ---- evolve ----
    auto* evolve = app.add_subcommand("evolve", "integrate ideal Euler on T^3");
    std::string e_init, e_dir = "snaps";
    double e_T = 1.0, e_dt = 1e-3, e_cfl = 0.5;
    int e_stride = 100;
    evolve->add_option("--init", e_init, "initial field (OFX1)")->required();
    evolve->add_option("--T", e_T, "final time")->required();
    evolve->add_option("--dt", e_dt, "time step")->required();
    evolve->add_option("--stride", e_stride, "snapshot stride in steps");
    evolve->add_option("--cfl", e_cfl, "CFL bound on dt");
    evolve->add_option("--out-dir", e_dir, "snapshot directory");

    // ---- mollify ----
    auto* mol = app.add_subcommand("mollify", "convolve with the bump mollifier");
    std::string m_in, m_out = "mollified.ofx";
    double m_eps = 0.0;
    mol->add_option("--eps", m_eps, "mollification scale")->required();
    mol->add_option("--in", m_in, "input field")->required();
    mol->add_option("--out", m_out, "output field");

    // ---- extend / restrict ----
    auto* ext = app.add_subcommand("extend", "reflect a half-space field");
    std::string x_in, x_out = "extended.ofx";
    ext->add_option("--in", x_in, "half-slab field")->required();
    ext->add_option("--out", x_out, "extended hybrid-slab field");
    auto* res = app.add_subcommand("restrict", "restrict to the upper half");
    std::string r_in, r_out = "restricted.ofx";
    res->add_option("--in", r_in, "hybrid-slab field")->required();
    res->add_option("--out", r_out, "half-slab field");

    // ---- flux ----
    auto* flux = app.add_subcommand("flux", "Duchon-Robert flux report");
    std::vector<std::string> f_in;
    std::vector<double> f_eps;
    std::string f_report = "flux.json";
    double f_dt = 1.0;
    bool f_nodirect = false;
    flux->add_option("--in", f_in, "snapshot file(s)")->required();
    flux->add_option("--eps-list", f_eps, "mollification scales")->required();
    flux->add_option("--dt", f_dt, "snapshot spacing in time");
    flux->add_flag("--no-direct", f_nodirect, "skip the quadrature evaluation");
    flux->add_option("--report", f_report, "output JSON report");

    // ---- structfn ----
    auto* sfn = app.add_subcommand("structfn", "third-order structure function");
    std::string s_in, s_report = "s3.csv";
    std::vector<double> s_shifts;
    sfn->add_option("--in", s_in, "input field")->required();
    sfn->add_option("--shifts", s_shifts, "shift magnitudes")->required();
    sfn->add_option("--report", s_report, "output CSV");

    // ---- criterion ----
    auto* cri = app.add_subcommand("criterion", "integral regularity criteria");
    std::string c_mode, c_report = "criterion.json";
    std::vector<std::string> c_in;
    std::vector<double> c_shifts;
    double c_delta = -1.0, c_alpha = -1.0, c_rmax = 0.0, c_core = 0.0, c_dt = 1.0;
    cri->add_option("--mode", c_mode, "s|besov|half")->required();
    cri->add_option("--in", c_in, "snapshot file(s)")->required();
    cri->add_option("--shifts", c_shifts, "shift magnitudes (s/half)");
    cri->add_option("--delta", c_delta, "Besov exponent delta > 0");
    cri->add_option("--alpha", c_alpha, "sets delta = 3*alpha - 1 (besov)");
    cri->add_option("--r-max", c_rmax, "Besov outer radius");
    cri->add_option("--core", c_core, "Besov core cutoff");
    cri->add_option("--dt", c_dt, "snapshot spacing in time");
    cri->add_option("--report", c_report, "output JSON report");

    // ---- modulus ----
    auto* mod = app.add_subcommand("modulus", "boundary continuity modulus");
    std::string w_in, w_report = "w.csv";
    std::vector<double> w_radii;
    mod->add_option("--in", w_in, "half- or hybrid-slab field")->required();
    mod->add_option("--radii", w_radii, "modulus radii")->required();
    mod->add_option("--report", w_report, "output CSV");

    // ---- run ----
    auto* run = app.add_subcommand("run", "execute an experiment config");
    std::string run_config, run_dir;
    run->add_option("--config", run_config, "config JSON file")->required();
    run->add_option("--out-dir", run_dir, "override the config output directory");

    // ---- render ----
    auto* ren = app.add_subcommand("render", "summarize report files");
    std::vector<std::string> ren_paths;
    std::string ren_csv;
    ren->add_option("reports", ren_paths, "FLUXR1 report files")->required();
    ren->add_option("--csv", ren_csv, "plot-ready CSV output");

    CLI11_PARSE(app, argc, argv);

    if (*gen) {
        ordered_json p{{"kind", g_kind}, {"N", g_N}, {"out", g_out}};
        if (g_L > 0.0) p["L"] = g_L;
        if (g_kind == "rough" || g_kind == "half") {
            p["alpha"] = g_alpha;
            p["seed"] = g_seed;
            p["kmin"] = g_kmin;
            p["kmax"] = g_kmax;
            p["amplitude"] = g_amp;
            if (g_kind == "rough") p["domain"] = g_domain;
        }
        if (g_kind == "abc") {
            p["A"] = g_A;
            p["B"] = g_B;
            p["C"] = g_C;
        }
        return do_stage("gen", p, "");
    }
    if (*evolve) {
        const ordered_json p{{"init", e_init}, {"T", e_T},      {"dt", e_dt},
                             {"stride", e_stride}, {"cfl", e_cfl}, {"out_dir", e_dir}};
        return do_stage("evolve", p, "");
    }
    if (*mol)
        return do_stage("mollify",
                        ordered_json{{"in", m_in}, {"eps", m_eps}, {"out", m_out}}, "");
    if (*ext)
        return do_stage("extend", ordered_json{{"in", x_in}, {"out", x_out}}, "");
    if (*res)
        return do_stage("restrict", ordered_json{{"in", r_in}, {"out", r_out}}, "");
    if (*flux) {
        const ordered_json p{{"in", f_in},         {"eps_list", f_eps},
                             {"dt", f_dt},         {"direct", !f_nodirect},
                             {"report", f_report}};
        return do_stage("flux", p, "");
    }
    if (*sfn)
        return do_stage(
            "structfn",
            ordered_json{{"in", s_in}, {"shifts", s_shifts}, {"report", s_report}}, "");
    if (*cri) {
        ordered_json p{{"mode", c_mode}, {"in", c_in}, {"dt", c_dt},
                       {"report", c_report}};
        if (!c_shifts.empty()) p["shifts"] = c_shifts;
        if (c_mode == "besov") {
            double delta = c_delta;
            if (delta <= 0.0 && c_alpha > 0.0) delta = 3.0 * c_alpha - 1.0;
            p["delta"] = delta;
            if (c_rmax > 0.0) p["r_max"] = c_rmax;
            if (c_core > 0.0) p["core"] = c_core;
        }
        return do_stage("criterion", p, "");
    }
    if (*mod)
        return do_stage(
            "modulus",
            ordered_json{{"in", w_in}, {"radii", w_radii}, {"report", w_report}}, "");
    if (*run) {
        std::ifstream in(run_config, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open config: " << run_config << "\n";
            return FD_ERR_IO;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        char* manifest = nullptr;
        const int rc =
            fd_run_pipeline(buf.str().c_str(), run_dir.c_str(), &manifest);
        if (rc != FD_OK) return fail(rc);
        std::cout << manifest;
        fd_string_free(manifest);
        return 0;
    }
    if (*ren) {
        std::vector<const char*> ptrs;
        for (const auto& s : ren_paths) ptrs.push_back(s.c_str());
        char* text = nullptr;
        const int rc = fd_render_reports(ptrs.data(), int(ptrs.size()),
                                         ren_csv.c_str(), &text);
        if (rc != FD_OK) return fail(rc);
        std::cout << text;
        fd_string_free(text);
        return 0;
    }
    return 0;
}
