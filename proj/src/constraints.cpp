#include "cmfn/constraints.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace cmfn {

namespace {

std::vector<Jet> point_jets(const Eigen::VectorXd& x, int axis, int order) {
  std::vector<Jet> xs;
  xs.reserve(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (static_cast<int>(d) == axis && order >= 1)
      xs.push_back(Jet::variable(x[d], order));
    else
      xs.push_back(Jet::constant(x[d], order));
  }
  return xs;
}

}  // namespace

double SmoothField::at(const Eigen::VectorXd& x) const {
  return axis_jet(x, -1, 0).value();
}

Jet SmoothField::axis_jet(const Eigen::VectorXd& x, int axis, int order) const {
  if (static_cast<int>(x.size()) != dim) throw ShapeError("field input dimension mismatch");
  return eval(point_jets(x, axis, order));
}

Jet trial_eval(const TrialFunction& t, const std::vector<Jet>& x) {
  if (static_cast<int>(x.size()) != t.net.input_dim())
    throw ShapeError("trial input dimension mismatch");
  const Jet g = t.g_term(x);
  const Jet w = t.weight(x);
  return g + w * mfn_forward(t.net, x)[0];
}

Jet trial_axis_jet(const TrialFunction& t, const Eigen::VectorXd& x, int axis, int order) {
  return trial_eval(t, point_jets(x, axis, order));
}

TracedJet trial_axis_jet(const TrialFunction& t, std::span<const TracedJet> params,
                         const Eigen::VectorXd& x, int axis, AdjointTrace& trace) {
  const int order = trace.order();
  std::vector<Jet> xj = point_jets(x, axis, order);
  const Jet g = t.g_term(xj);
  const Jet w = t.weight(xj);
  std::vector<TracedJet> xs;
  xs.reserve(xj.size());
  for (const Jet& j : xj) xs.push_back(trace.constant(j));
  TracedJet n = mfn_forward(t.net, params, xs)[0];
  return trace.constant(g) + trace.constant(w) * n;
}

SmoothField hermite_weight_interval(double a, double b) {
  if (a >= b) throw ConfigError("hermite weight needs a < b");
  std::ostringstream label;
  label << "(x - " << a << ")(" << b << " - x)";
  return SmoothField{1, label.str(), [a, b](const std::vector<Jet>& x) {
                       return (x[0] - a) * (b - x[0]);
                     }};
}

SmoothField tensor_weight_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw ConfigError("invalid box bounds");
  for (Eigen::Index d = 0; d < lo.size(); ++d)
    if (lo[d] >= hi[d]) throw ConfigError("invalid box bounds");
  const int dim = static_cast<int>(lo.size());
  return SmoothField{dim, "prod_d (x_d - lo_d)(hi_d - x_d)",
                     [lo, hi](const std::vector<Jet>& x) {
                       Jet w = (x[0] - lo[0]) * (hi[0] - x[0]);
                       for (size_t d = 1; d < x.size(); ++d)
                         w = w * ((x[d] - lo[d]) * (hi[d] - x[d]));
                       return w;
                     }};
}

SmoothField exp_weight_halfline(double x0) {
  std::ostringstream label;
  label << "1 - exp(-(x - " << x0 << "))";
  return SmoothField{1, label.str(), [x0](const std::vector<Jet>& x) {
                       return 1.0 - exp(-(x[0] - x0));
                     }};
}

ValidationReport validate_constraints(const TrialFunction& t,
                                      const std::vector<Eigen::VectorXd>& boundary_samples,
                                      const std::function<double(const Eigen::VectorXd&)>& g,
                                      const std::vector<Eigen::VectorXd>& interior_samples,
                                      double tol) {
  if (boundary_samples.empty() || interior_samples.empty())
    throw ConfigError("validate_constraints needs nonempty sample lists");

  ValidationReport report;
  const int dim = t.net.input_dim();

  // Two distinct random parameter draws; boundary exactness must not depend
  // on the network.
  TrialFunction probe = t;
  for (uint64_t draw = 1; draw <= 2; ++draw) {
    probe.net = mfn_init(t.net.widths, t.net.seed + 1000 * draw, t.net.activation);
    // randomize the biases too: freshly initialized tanh networks are exactly
    // zero at the origin, which would mask a weight that fails to vanish there
    std::mt19937 rng(static_cast<uint32_t>(t.net.seed + draw));
    std::uniform_real_distribution<double> bias(-0.7, 0.7);
    for (Eigen::VectorXd& b : probe.net.betas)
      for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = bias(rng);
    for (const Eigen::VectorXd& xb : boundary_samples) {
      std::vector<Jet> xj;
      for (Eigen::Index d = 0; d < xb.size(); ++d) xj.push_back(Jet::constant(xb[d], 0));
      const double err = std::abs(trial_eval(probe, xj).value() - g(xb));
      if (err > tol) {
        report.pass = false;
        report.violations.push_back({xb, err, "boundary mismatch (draw " + std::to_string(draw) + ")"});
      }
    }
  }

  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
  for (const Eigen::VectorXd& xi : interior_samples) centroid += xi;
  centroid /= static_cast<double>(interior_samples.size());

  for (const Eigen::VectorXd& xi : interior_samples) {
    std::vector<Jet> xj;
    for (Eigen::Index d = 0; d < xi.size(); ++d) xj.push_back(Jet::constant(xi[d], 0));
    const double w = t.weight(xj).value();
    if (w == 0.0) {
      report.pass = false;
      report.violations.push_back({xi, 0.0, "weight vanishes at interior sample"});
    }
  }

  // Flat-weight probe: a weight whose slope vanishes at a boundary point lets
  // G dominate value and first derivative there (the x^2(1-x) failure mode).
  // Corners of 2D boxes are excluded; product weights are always flat there.
  Eigen::VectorXd bb_lo = boundary_samples.front(), bb_hi = boundary_samples.front();
  for (const Eigen::VectorXd& xb : boundary_samples) {
    bb_lo = bb_lo.cwiseMin(xb);
    bb_hi = bb_hi.cwiseMax(xb);
  }
  const double h = 1e-6;
  for (const Eigen::VectorXd& xb : boundary_samples) {
    if (dim > 1) {
      int extreme = 0;
      for (Eigen::Index d = 0; d < xb.size(); ++d)
        if (xb[d] == bb_lo[d] || xb[d] == bb_hi[d]) ++extreme;
      if (extreme > 1) continue;
    }
    Eigen::VectorXd dir = centroid - xb;
    const double norm = dir.norm();
    if (norm == 0.0) continue;
    dir /= norm;
    std::vector<Jet> xp, x0;
    for (Eigen::Index d = 0; d < xb.size(); ++d) {
      xp.push_back(Jet::constant(xb[d] + h * dir[d], 0));
      x0.push_back(Jet::constant(xb[d], 0));
    }
    const double slope = (t.weight(xp).value() - t.weight(x0).value()) / h;
    if (std::abs(slope) < 1e-4) {
      std::ostringstream msg;
      msg << "weight slope ~" << slope << " at boundary sample (";
      for (Eigen::Index d = 0; d < xb.size(); ++d) msg << (d ? "," : "") << xb[d];
      msg << "); boundary term will dominate the first derivative there";
      report.warnings.push_back(msg.str());
    }
  }

  return report;
}

}  // namespace cmfn
