#include "fluxdiag/fluxdiag.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/flux.hpp"
#include "../core/mollifier.hpp"
#include "../core/ofx.hpp"
#include "../core/pipeline.hpp"
#include "../core/reflect.hpp"
#include "../core/report.hpp"
#include "../core/spectral.hpp"
#include "../core/types.hpp"

using namespace fluxdiag;

struct fd_field {
    VelocityField f;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return e.code;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FD_ERR_VALIDATION;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("null argument: ") + what);
}

}  // namespace

extern "C" {

const char* fd_version(void) { return kToolVersion; }

const char* fd_last_error(void) { return g_last_error.c_str(); }

int fd_field_read(const char* path, fd_field** out) {
    return guarded([&] {
        require(path && out, "fd_field_read");
        *out = new fd_field{read_ofx(path)};
    });
}

int fd_field_write(const fd_field* f, const char* path) {
    return guarded([&] {
        require(f && path, "fd_field_write");
        write_ofx(path, f->f);
    });
}

void fd_field_free(fd_field* f) { delete f; }

int fd_field_info(const fd_field* f, int resolution[3], double lengths[3],
                  char* kind, size_t kind_len) {
    return guarded([&] {
        require(f, "fd_field_info");
        const Grid& g = f->f.grid;
        if (resolution)
            for (int a = 0; a < 3; ++a) resolution[a] = g.N[a];
        if (lengths)
            for (int a = 0; a < 3; ++a) lengths[a] = g.domain.L[a];
        if (kind && kind_len > 0) {
            const std::string s = to_string(g.domain.kind);
            std::strncpy(kind, s.c_str(), kind_len - 1);
            kind[kind_len - 1] = '\0';
        }
    });
}

int fd_field_energy(const fd_field* f, double* out) {
    return guarded([&] {
        require(f && out, "fd_field_energy");
        *out = energy(f->f);
    });
}

int fd_field_max_divergence(const fd_field* f, double* out) {
    return guarded([&] {
        require(f && out, "fd_field_max_divergence");
        *out = max_spectral_divergence(f->f);
    });
}

int fd_leray_project(const fd_field* f, fd_field** out) {
    return guarded([&] {
        require(f && out, "fd_leray_project");
        *out = new fd_field{leray_project(f->f)};
    });
}

int fd_mollify(const fd_field* f, double eps, fd_field** out) {
    return guarded([&] {
        require(f && out, "fd_mollify");
        const Mollifier m = build_mollifier(eps, f->f.grid);
        *out = new fd_field{convolve(f->f, m)};
    });
}

int fd_extend(const fd_field* half, fd_field** out, int* trace_warned) {
    return guarded([&] {
        require(half && out, "fd_extend");
        bool warned = false;
        *out = new fd_field{extend(half->f, &warned)};
        if (trace_warned) *trace_warned = warned ? 1 : 0;
    });
}

int fd_restrict(const fd_field* hybrid, fd_field** out) {
    return guarded([&] {
        require(hybrid && out, "fd_restrict");
        *out = new fd_field{restrict_half(hybrid->f)};
    });
}

int fd_structure_fn(const fd_field* f, const double y[3], double* out) {
    return guarded([&] {
        require(f && y && out, "fd_structure_fn");
        const Vec3 yy{y[0], y[1], y[2]};
        *out = f->f.grid.domain.kind == DomainKind::HalfSlab
                   ? structure_fn_half(f->f, yy)
                   : structure_fn(f->f, yy);
    });
}

int fd_flux(const fd_field* f, double eps, double* out) {
    return guarded([&] {
        require(f && out, "fd_flux");
        const Mollifier m = build_mollifier(eps, f->f.grid);
        *out = j_eps_bilinear(f->f, m);
    });
}

int fd_run_stage(const char* stage, const char* params_json,
                 const char* out_dir, char** outputs) {
    return guarded([&] {
        require(stage && params_json, "fd_run_stage");
        nlohmann::ordered_json params;
        try {
            params = nlohmann::ordered_json::parse(params_json);
        } catch (const std::exception& e) {
            throw ValidationError(std::string("bad stage parameters: ") + e.what());
        }
        const auto files = run_stage(stage, params, out_dir ? out_dir : "");
        if (outputs) {
            std::string joined;
            for (const auto& f : files) {
                if (!joined.empty()) joined += '\n';
                joined += f;
            }
            *outputs = dup_string(joined);
        }
    });
}

int fd_run_pipeline(const char* config_json, const char* out_dir,
                    char** manifest_json) {
    return guarded([&] {
        require(config_json, "fd_run_pipeline");
        const RunManifest man =
            run_pipeline(config_json, out_dir ? out_dir : "");
        if (manifest_json) *manifest_json = dup_string(man.to_json());
    });
}

int fd_render_reports(const char* const* report_paths, int count,
                      const char* csv_path, char** text) {
    return guarded([&] {
        require(report_paths && count > 0, "fd_render_reports");
        std::vector<std::string> paths;
        for (int i = 0; i < count; ++i) {
            require(report_paths[i], "fd_render_reports path");
            paths.emplace_back(report_paths[i]);
        }
        const std::string out =
            render_reports(paths, csv_path ? csv_path : "");
        if (text) *text = dup_string(out);
    });
}

void fd_string_free(char* s) { std::free(s); }

}  // extern "C"
