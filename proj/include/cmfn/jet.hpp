#ifndef CMFN_JET_HPP
#define CMFN_JET_HPP

#include <Eigen/Dense>

#include "cmfn/errors.hpp"

namespace cmfn {

/// Truncated Taylor expansion of a scalar quantity along one input direction.
/// coeff(k) stores f^(k)(x0)/k! (the power-series coefficient); raw derivatives
/// come back through derivative(k). Jets are immutable value types.
class Jet {
 public:
  Jet() : coeffs_(Eigen::VectorXd::Zero(1)) {}

  static Jet constant(double c, int order);
  static Jet variable(double x0, int order);  // seeded input, order >= 1
  static Jet from_coeffs(Eigen::VectorXd coeffs);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  double value() const { return coeffs_[0]; }
  double coeff(int k) const;
  double derivative(int k) const;  // k! * coeff(k)
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);

 private:
  explicit Jet(Eigen::VectorXd c) : coeffs_(std::move(c)) {}
  Eigen::VectorXd coeffs_;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);

Jet operator+(const Jet& a, double c);
Jet operator+(double c, const Jet& a);
Jet operator-(const Jet& a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(const Jet& a, double c);
Jet operator*(double c, const Jet& a);
Jet operator/(const Jet& a, double c);
Jet operator/(double c, const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet pow_int(const Jet& a, int n);
Jet pow(const Jet& a, double p);  // requires positive constant term

/// Coefficient extraction as a jet-valued operation: a constant jet whose
/// value is the k-th raw derivative carried by a.
Jet extract(const Jet& a, int k);

/// Lift helpers shared with the traced scalar type (see trace.hpp).
inline Jet lift_like(const Jet& exemplar, const Jet& j) {
  if (j.order() != exemplar.order()) throw ShapeError("lift_like: jet order mismatch");
  return j;
}
inline Jet lift_like(const Jet& exemplar, double c) {
  return Jet::constant(c, exemplar.order());
}

}  // namespace cmfn

#endif
