#pragma once
// The quantitative core: structure functions, the Duchon-Robert flux J_eps
// (two independent evaluations), and the integral regularity criteria.

#include "mollifier.hpp"
#include "report.hpp"
#include "types.hpp"

namespace fluxdiag {

// Declared inertial band on which slope fits replace scale-to-zero limits.
inline std::array<double, 2> inertial_band(const Grid& g) {
    const double h = std::max({g.h(0), g.h(1), g.h(2)});
    const double L = std::min(
        {g.domain.box_len(0), g.domain.box_len(1), g.domain.box_len(2)});
    return {3.0 * h, L / 8.0};
}

// S3(y) = integral over D of |u(x+y) - u(x)|^3 dx.
double structure_fn(const VelocityField& u, const Vec3& y);
// Half-space variant: integrate only over {x3 > |y|} (Eq.-(10) bulk term).
double structure_fn_half(const VelocityField& u_half, const Vec3& y);

// Deterministic direction designs.
std::vector<Vec3> shift_directions();        // 8 mixed unit directions

// S-condition estimator over a weighted snapshot list.
CriterionReport s_condition(const std::vector<VelocityField>& fields,
                            const std::vector<double>& weights,
                            const std::vector<double>& shifts);

// Integral of |z|^-(4+delta) S3(z) over core < |z| <= r_max, radial x
// angular quadrature; the unresolved |z| < core part is reported separately.
double besov_integral(const VelocityField& u, double delta, double r_max,
                      double core = 0.0, double* remainder = nullptr,
                      int ntheta = 4, int nphi = 8);

// Shared spectra for the two J_eps routes. Products u_i u_j are computed on
// a 2x zero-padded grid so their coefficients are alias-free.
class FluxWorkspace {
  public:
    explicit FluxWorkspace(const VelocityField& u);

    double j_bilinear(const Mollifier& m) const;
    double j_direct(const Mollifier& m, int nr = 32, int ntheta = 20,
                    int nphi = 40) const;
    bool hypothesis_warning() const { return !divfree_; }
    const Grid& grid() const { return grid_; }

  private:
    Grid grid_;
    bool divfree_ = true;
    // physical-amplitude spectra over the r2c modes of the original grid
    std::array<std::vector<cplx>, 3> U_;
    std::array<std::vector<cplx>, 6> VV_;  // 11,22,33,12,13,23
    std::vector<cplx> Q_;                  // |u|^2
};

double j_eps_direct(const VelocityField& u, const Mollifier& m);
double j_eps_bilinear(const VelocityField& u, const Mollifier& m);

struct SnapshotSeries {
    std::vector<double> times;
    std::vector<VelocityField> fields;
    double dt = 0.0;
    std::vector<double> energies;
};

FluxReport dissipation_estimate(const SnapshotSeries& series,
                                const std::vector<double>& eps_list,
                                bool include_direct = false);

}  // namespace fluxdiag
