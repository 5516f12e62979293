#ifndef CMFN_TAYLOR_KERNELS_HPP
#define CMFN_TAYLOR_KERNELS_HPP

// Low-level recurrences on truncated power series. All arrays hold n = order+1
// normalized Taylor coefficients (coeff[k] = f^(k)/k!, i.e. plain power-series
// coefficients). Output buffers must not alias inputs unless noted.

namespace cmfn::taylor {

// out[k] = sum_{j<=k} a[j] * b[k-j]
void mul(const double* a, const double* b, double* out, int n);

// Transposed-Toeplitz accumulate: out[j] += sum_{k>=j} adj[k] * p[k-j].
// This is the adjoint of "multiply by the series p".
void corr(const double* adj, const double* p, double* out, int n);

// out = 1/b; requires b[0] != 0 (caller checks).
void recip(const double* b, double* out, int n);

// out = exp(a)
void exp_(const double* a, double* out, int n);

// s = sin(a), c = cos(a); computed jointly.
void sincos(const double* a, double* s, double* c, int n);

// s = sinh(a), c = cosh(a)
void sinhcosh(const double* a, double* s, double* c, int n);

// g = tanh(a), h = sech^2(a) = 1 - g^2; computed jointly.
void tanh_(const double* a, double* g, double* h, int n);

// out = log(a); requires a[0] > 0 (caller checks).
void log_(const double* a, double* out, int n);

}  // namespace cmfn::taylor

#endif
