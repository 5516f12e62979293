#include "cmfn/taylor_kernels.hpp"

#include <cmath>

namespace cmfn::taylor {

void mul(const double* a, const double* b, double* out, int n) {
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    out[k] = acc;
  }
}

void corr(const double* adj, const double* p, double* out, int n) {
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = j; k < n; ++k) acc += adj[k] * p[k - j];
    out[j] += acc;
  }
}

void recip(const double* b, double* out, int n) {
  const double r0 = 1.0 / b[0];
  out[0] = r0;
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += b[j] * out[k - j];
    out[k] = -r0 * acc;
  }
}

void exp_(const double* a, double* out, int n) {
  out[0] = std::exp(a[0]);
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a[j] * out[k - j];
    out[k] = acc / k;
  }
}

void sincos(const double* a, double* s, double* c, int n) {
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (int k = 1; k < n; ++k) {
    double accs = 0.0, accc = 0.0;
    for (int j = 1; j <= k; ++j) {
      accs += j * a[j] * c[k - j];
      accc += j * a[j] * s[k - j];
    }
    s[k] = accs / k;
    c[k] = -accc / k;
  }
}

void sinhcosh(const double* a, double* s, double* c, int n) {
  s[0] = std::sinh(a[0]);
  c[0] = std::cosh(a[0]);
  for (int k = 1; k < n; ++k) {
    double accs = 0.0, accc = 0.0;
    for (int j = 1; j <= k; ++j) {
      accs += j * a[j] * c[k - j];
      accc += j * a[j] * s[k - j];
    }
    s[k] = accs / k;
    c[k] = accc / k;
  }
}

void tanh_(const double* a, double* g, double* h, int n) {
  g[0] = std::tanh(a[0]);
  h[0] = 1.0 - g[0] * g[0];
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a[j] * h[k - j];
    g[k] = acc / k;
    double acch = 0.0;
    for (int j = 0; j <= k; ++j) acch += g[j] * g[k - j];
    h[k] = -acch;
  }
}

void log_(const double* a, double* out, int n) {
  out[0] = std::log(a[0]);
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j < k; ++j) acc += j * out[j] * a[k - j];
    out[k] = (a[k] - acc / k) / a[0];
  }
}

}  // namespace cmfn::taylor
