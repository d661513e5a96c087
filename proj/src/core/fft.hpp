#pragma once
// Thin FFTW3 wrapper with a per-size plan cache.
//
// Normalization is unitary-symmetric: both directions carry 1/sqrt(Ntot),
// so sum_x |u|^2 == sum_k w_k |u_hat|^2 with Hermitian weights w_k.
// Plans use FFTW_ESTIMATE: plan selection is then independent of runtime
// timing, which keeps results bit-reproducible run to run.

#include "types.hpp"

namespace fluxdiag {

// Out-of-place r2c transform of one scalar array (grid layout, x3 fastest).
// Input is preserved.
void fft_forward(const Grid& g, const double* in, cplx* out);
// Out-of-place c2r; input is preserved (internally copied to scratch).
void fft_inverse(const Grid& g, const cplx* in, double* out);

SpectralScalar fft_forward(const ScalarField& f);
ScalarField fft_inverse(const SpectralScalar& s);

// Number of worker threads requested via FLUXDIAG_WORKERS (>=1).
int worker_count();

}  // namespace fluxdiag
