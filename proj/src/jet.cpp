#include "cmfn/jet.hpp"

#include <cmath>

#include "cmfn/taylor_kernels.hpp"

namespace cmfn {

namespace {

void check_same_order(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) throw ShapeError("jet order mismatch");
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Jet Jet::constant(double c, int order) {
  if (order < 0) throw ConfigError("jet order must be >= 0");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(order + 1);
  v[0] = c;
  return Jet(std::move(v));
}

Jet Jet::variable(double x0, int order) {
  if (order < 1) throw ConfigError("seeded jet variable needs order >= 1");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(order + 1);
  v[0] = x0;
  v[1] = 1.0;
  return Jet(std::move(v));
}

Jet Jet::from_coeffs(Eigen::VectorXd coeffs) {
  if (coeffs.size() < 1) throw ConfigError("jet needs at least one coefficient");
  return Jet(std::move(coeffs));
}

double Jet::coeff(int k) const {
  if (k < 0 || k > order()) throw ConfigError("jet coefficient index out of range");
  return coeffs_[k];
}

double Jet::derivative(int k) const {
  if (k < 0 || k > order()) throw ConfigError("derivative order exceeds jet order");
  return factorial(k) * coeffs_[k];
}

Jet Jet::operator-() const { return Jet(-coeffs_); }

Jet& Jet::operator+=(const Jet& rhs) {
  check_same_order(*this, rhs);
  coeffs_ += rhs.coeffs_;
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_same_order(*this, rhs);
  coeffs_ -= rhs.coeffs_;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  check_same_order(a, b);
  return Jet::from_coeffs(a.coeffs() + b.coeffs());
}

Jet operator-(const Jet& a, const Jet& b) {
  check_same_order(a, b);
  return Jet::from_coeffs(a.coeffs() - b.coeffs());
}

Jet operator*(const Jet& a, const Jet& b) {
  check_same_order(a, b);
  const int n = a.order() + 1;
  Eigen::VectorXd out(n);
  taylor::mul(a.coeffs().data(), b.coeffs().data(), out.data(), n);
  return Jet::from_coeffs(std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) {
  check_same_order(a, b);
  if (b.value() == 0.0) throw SingularOperation("jet division by zero constant term");
  const int n = a.order() + 1;
  Eigen::VectorXd r(n), out(n);
  taylor::recip(b.coeffs().data(), r.data(), n);
  taylor::mul(a.coeffs().data(), r.data(), out.data(), n);
  return Jet::from_coeffs(std::move(out));
}

Jet operator+(const Jet& a, double c) {
  Eigen::VectorXd v = a.coeffs();
  v[0] += c;
  return Jet::from_coeffs(std::move(v));
}
Jet operator+(double c, const Jet& a) { return a + c; }
Jet operator-(const Jet& a, double c) { return a + (-c); }
Jet operator-(double c, const Jet& a) { return (-a) + c; }
Jet operator*(const Jet& a, double c) { return Jet::from_coeffs(a.coeffs() * c); }
Jet operator*(double c, const Jet& a) { return a * c; }
Jet operator/(const Jet& a, double c) {
  if (c == 0.0) throw SingularOperation("jet division by zero scalar");
  return a * (1.0 / c);
}
Jet operator/(double c, const Jet& a) { return Jet::constant(c, a.order()) / a; }

Jet exp(const Jet& a) {
  const int n = a.order() + 1;
  Eigen::VectorXd out(n);
  taylor::exp_(a.coeffs().data(), out.data(), n);
  return Jet::from_coeffs(std::move(out));
}

Jet log(const Jet& a) {
  if (a.value() <= 0.0) throw SingularOperation("jet log of nonpositive constant term");
  const int n = a.order() + 1;
  Eigen::VectorXd out(n);
  taylor::log_(a.coeffs().data(), out.data(), n);
  return Jet::from_coeffs(std::move(out));
}

Jet sin(const Jet& a) {
  const int n = a.order() + 1;
  Eigen::VectorXd s(n), c(n);
  taylor::sincos(a.coeffs().data(), s.data(), c.data(), n);
  return Jet::from_coeffs(std::move(s));
}

Jet cos(const Jet& a) {
  const int n = a.order() + 1;
  Eigen::VectorXd s(n), c(n);
  taylor::sincos(a.coeffs().data(), s.data(), c.data(), n);
  return Jet::from_coeffs(std::move(c));
}

Jet sinh(const Jet& a) {
  const int n = a.order() + 1;
  Eigen::VectorXd s(n), c(n);
  taylor::sinhcosh(a.coeffs().data(), s.data(), c.data(), n);
  return Jet::from_coeffs(std::move(s));
}

Jet cosh(const Jet& a) {
  const int n = a.order() + 1;
  Eigen::VectorXd s(n), c(n);
  taylor::sinhcosh(a.coeffs().data(), s.data(), c.data(), n);
  return Jet::from_coeffs(std::move(c));
}

Jet tanh(const Jet& a) {
  const int n = a.order() + 1;
  Eigen::VectorXd g(n), h(n);
  taylor::tanh_(a.coeffs().data(), g.data(), h.data(), n);
  return Jet::from_coeffs(std::move(g));
}

Jet pow_int(const Jet& a, int n) {
  if (n == 0) return Jet::constant(1.0, a.order());
  const bool neg = n < 0;
  unsigned e = neg ? static_cast<unsigned>(-static_cast<long long>(n)) : static_cast<unsigned>(n);
  Jet base = a;
  Jet acc = Jet::constant(1.0, a.order());
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  if (neg) return Jet::constant(1.0, a.order()) / acc;
  return acc;
}

Jet pow(const Jet& a, double p) { return exp(p * log(a)); }

Jet extract(const Jet& a, int k) { return Jet::constant(a.derivative(k), a.order()); }

}  // namespace cmfn
