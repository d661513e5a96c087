#include "fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <tuple>

namespace fluxdiag {

namespace {

struct PlanSet {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::vector<double> rbuf;
    std::vector<cplx> cbuf;
};

std::map<std::tuple<int, int, int>, PlanSet>& plan_cache() {
    static std::map<std::tuple<int, int, int>, PlanSet> cache;
    return cache;
}
std::mutex plan_mutex;

PlanSet& plans_for(const Grid& g) {
    std::lock_guard<std::mutex> lk(plan_mutex);
    auto key = std::make_tuple(g.N[0], g.N[1], g.N[2]);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PlanSet ps;
    ps.rbuf.assign(g.npoints(), 0.0);
    ps.cbuf.assign(SpectralField::ncoeff(g), cplx(0.0));
    ps.fwd = fftw_plan_dft_r2c_3d(
        g.N[0], g.N[1], g.N[2], ps.rbuf.data(),
        reinterpret_cast<fftw_complex*>(ps.cbuf.data()), FFTW_ESTIMATE);
    ps.bwd = fftw_plan_dft_c2r_3d(
        g.N[0], g.N[1], g.N[2], reinterpret_cast<fftw_complex*>(ps.cbuf.data()),
        ps.rbuf.data(), FFTW_ESTIMATE);
    if (!ps.fwd || !ps.bwd) throw NumericalError("FFTW plan creation failed");
    return cache.emplace(key, std::move(ps)).first->second;
}

}  // namespace

void fft_forward(const Grid& g, const double* in, cplx* out) {
    PlanSet& ps = plans_for(g);
    std::copy(in, in + g.npoints(), ps.rbuf.begin());
    fftw_execute(ps.fwd);
    const double s = 1.0 / std::sqrt(double(g.npoints()));
    const std::size_t nc = SpectralField::ncoeff(g);
    for (std::size_t i = 0; i < nc; ++i) out[i] = ps.cbuf[i] * s;
}

void fft_inverse(const Grid& g, const cplx* in, double* out) {
    PlanSet& ps = plans_for(g);
    const std::size_t nc = SpectralField::ncoeff(g);
    std::copy(in, in + nc, ps.cbuf.begin());
    fftw_execute(ps.bwd);  // destroys cbuf, which is scratch anyway
    const double s = 1.0 / std::sqrt(double(g.npoints()));
    const std::size_t n = g.npoints();
    for (std::size_t i = 0; i < n; ++i) out[i] = ps.rbuf[i] * s;
}

SpectralScalar fft_forward(const ScalarField& f) {
    SpectralScalar s(f.grid);
    fft_forward(f.grid, f.a.data(), s.a.data());
    return s;
}

ScalarField fft_inverse(const SpectralScalar& s) {
    ScalarField f(s.grid);
    fft_inverse(s.grid, s.a.data(), f.a.data());
    return f;
}

int worker_count() {
    static int n = [] {
        const char* env = std::getenv("FLUXDIAG_WORKERS");
        if (!env) return 1;
        int v = std::atoi(env);
        return v >= 1 ? v : 1;
    }();
    return n;
}

}  // namespace fluxdiag
