#ifndef CMFN_CONSTRAINTS_HPP
#define CMFN_CONSTRAINTS_HPP

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cmfn/jet.hpp"
#include "cmfn/network.hpp"
#include "cmfn/trace.hpp"

namespace cmfn {

/// Closed-form field evaluable on jets to any order; houses the boundary term
/// G(x), the weight w(x), and analytic solutions.
struct SmoothField {
  int dim = 1;
  std::string label;
  std::function<Jet(const std::vector<Jet>&)> eval;

  Jet operator()(const std::vector<Jet>& x) const { return eval(x); }
  double at(const Eigen::VectorXd& x) const;
  /// Jet of the field at x, seeded along one axis.
  Jet axis_jet(const Eigen::VectorXd& x, int axis, int order) const;
};

/// Trial function y(x) = G(x) + w(x) * N(x). The boundary data holds by
/// construction for any network parameters.
struct TrialFunction {
  SmoothField g_term;
  SmoothField weight;
  Mfn net;
};

Jet trial_eval(const TrialFunction& t, const std::vector<Jet>& x);

/// Jet of the trial along one axis, network parameters taken from the net.
Jet trial_axis_jet(const TrialFunction& t, const Eigen::VectorXd& x, int axis, int order);

/// Traced version: the network part runs on parameter leaves, G and w enter
/// as constants (they carry no trainable parameters).
TracedJet trial_axis_jet(const TrialFunction& t, std::span<const TracedJet> params,
                         const Eigen::VectorXd& x, int axis, AdjointTrace& trace);

/// w(x) = (x - a)(b - x): vanishes at both endpoints with nonzero slope.
SmoothField hermite_weight_interval(double a, double b);

/// Product of per-axis Hermite factors over a box; x(1-x)y(1-y) on the unit
/// square.
SmoothField tensor_weight_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// w(x) = 1 - exp(-(x - x0)): zero at x0, approaches 1 to the right.
SmoothField exp_weight_halfline(double x0);

struct ValidationReport {
  bool pass = true;
  struct Violation {
    Eigen::VectorXd point;
    double error;
    std::string what;
  };
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
};

/// Checks boundary exactness |y(xb) - g(xb)| <= tol under two distinct random
/// parameter draws, and that the weight is nonzero at every interior sample.
/// Warns when the weight's boundary slope (finite-difference probe toward the
/// domain interior) vanishes.
ValidationReport validate_constraints(const TrialFunction& t,
                                      const std::vector<Eigen::VectorXd>& boundary_samples,
                                      const std::function<double(const Eigen::VectorXd&)>& g,
                                      const std::vector<Eigen::VectorXd>& interior_samples,
                                      double tol);

}  // namespace cmfn

#endif
