#pragma once
// Reflection map, half-space extension, their weak-solution identities, and
// the boundary continuity modulus.
//
// Convention: a HalfSlab array always indexes x3 as the distance from the
// boundary plane into its own half, so the reflection f -> f_R is the sign
// flip of the normal component on identical node data. This makes the
// involution bit-exact by construction.

#include "report.hpp"
#include "types.hpp"

namespace fluxdiag {

inline constexpr double kTraceTolFactor = 1e-8;

// Reflection across x3 = 0 (HalfSlab fields).
VelocityField reflect(const VelocityField& f);

// Max |u3| on the boundary row, and the near-boundary sup |u| scale used by
// the trace tolerance.
double boundary_trace(const VelocityField& f);
double boundary_sup(const VelocityField& f);

// Extension u_E = u + u_R onto the matching HybridSlab grid. The boundary
// row takes the pointwise value (f1, f2, 0); the seam row (x3 = +-L3) is
// zero. If the u3 trace exceeds trace_tol the extension is discontinuous;
// *warned is set (computation proceeds).
VelocityField extend(const VelocityField& half, bool* warned = nullptr);

// Restriction of a HybridSlab field to x3 >= 0.
VelocityField restrict_half(const VelocityField& hybrid);

// |LHS - RHS| / (|LHS| + |RHS| + floor) for the change-of-variables identity
//   int_{D-} (u_R)_i (u_R)_j d_j (psi_R)_i = int_{D+} u_i u_j d_j psi_i.
double nonlinear_identity_check(const VelocityField& u, const VelocityField& psi);

// Boundary continuity modulus w(r) on a deterministic >= 26-direction design.
ContinuityModulus continuity_modulus(const VelocityField& f,
                                     const std::vector<double>& radii);

// Theorem 5.3 estimator: bulk (Eq. (10)) slope plus the boundary-strip bound
// |T^2| w(2|y|)^3 from the continuity modulus.
CriterionReport halfspace_criterion(const std::vector<VelocityField>& snapshots,
                                    const std::vector<double>& weights,
                                    const std::vector<double>& shifts);

}  // namespace fluxdiag
