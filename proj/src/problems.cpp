#include "cmfn/problems.hpp"

#include <cmath>

namespace cmfn {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Eigen::VectorXd> interval_boundary(double a, double b, bool left_only) {
  // The sample count is accepted for interface uniformity; an interval has
  // one or two boundary points.
  std::vector<Eigen::VectorXd> pts;
  Eigen::VectorXd p(1);
  p[0] = a;
  pts.push_back(p);
  if (!left_only) {
    p[0] = b;
    pts.push_back(p);
  }
  return pts;
}

std::vector<Eigen::VectorXd> square_boundary(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                             int n) {
  std::vector<Eigen::VectorXd> pts;
  const int per_edge = std::max(2, n / 4);
  for (int i = 0; i < per_edge; ++i) {
    const double s = static_cast<double>(i) / (per_edge - 1);
    Eigen::VectorXd p(2);
    p << lo[0] + s * (hi[0] - lo[0]), lo[1];
    pts.push_back(p);
    p << lo[0] + s * (hi[0] - lo[0]), hi[1];
    pts.push_back(p);
    p << lo[0], lo[1] + s * (hi[1] - lo[1]);
    pts.push_back(p);
    p << hi[0], lo[1] + s * (hi[1] - lo[1]);
    pts.push_back(p);
  }
  return pts;
}

SmoothField laplace_analytic() {
  return SmoothField{2, "sin(pi x) sinh(pi y) / sinh(pi)", [](const std::vector<Jet>& x) {
                       return sin(kPi * x[0]) * sinh(kPi * x[1]) * (1.0 / std::sinh(kPi));
                     }};
}

SmoothField laplace_g_term() {
  return SmoothField{2, "y sin(pi x)", [](const std::vector<Jet>& x) {
                       return x[1] * sin(kPi * x[0]);
                     }};
}

double laplace_boundary_value(const Eigen::VectorXd& x) {
  // zero on three edges, sin(pi x) on y = 1
  if (x[1] == 1.0) return std::sin(kPi * x[0]);
  return 0.0;
}

ProblemSpec dirichlet_square_base() {
  ProblemSpec p;
  p.dim = 2;
  p.residual_order = 2;
  p.lo = Eigen::Vector2d(0.0, 0.0);
  p.hi = Eigen::Vector2d(1.0, 1.0);
  p.g_term = laplace_g_term();
  p.weight = tensor_weight_box(p.lo, p.hi);
  p.default_widths = {2, 40, 40, 1};
  p.default_grid_2d = 30;
  p.boundary_value = laplace_boundary_value;
  const Eigen::VectorXd lo = p.lo, hi = p.hi;
  p.boundary_samples = [lo, hi](int n) { return square_boundary(lo, hi, n); };
  return p;
}

}  // namespace

BLConstant solve_bl_constant(double nu) {
  if (nu <= 0.0) throw ConfigError("boundary-layer nu must be positive");
  auto f = [nu](double c) { return 1.0 - 2.0 / (1.0 + c) - std::exp(-c / nu); };
  // f(1) = -exp(-1/nu) < 0 for every nu, so [1, 11] always brackets the root
  double a = 1.0, b = 11.0;
  double fa = f(a), fb = f(b);
  if (fa * fb > 0.0) throw BracketError("no sign change for the boundary-layer constant");
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (std::abs(fm) <= 1e-14 || (b - a) < 1e-16) return {nu, m};
    if (fa * fm <= 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return {nu, 0.5 * (a + b)};
}

ProblemSpec problem_integral() {
  ProblemSpec p;
  p.name = "integral";
  p.kind = ProblemKind::Integral;
  p.dim = 1;
  p.residual_order = 1;
  p.lo = Eigen::VectorXd::Constant(1, 0.0);
  p.hi = Eigen::VectorXd::Constant(1, 10.0);
  p.y0 = 1.0;
  const double y0 = p.y0;
  p.g_term = SmoothField{1, "y0 exp(-x)", [y0](const std::vector<Jet>& x) {
                           return y0 * exp(-x[0]);
                         }};
  p.weight = exp_weight_halfline(0.0);
  p.default_widths = {1, 20, 20, 1};
  p.default_points_1d = 1000;
  p.boundary_value = [y0](const Eigen::VectorXd&) { return y0; };
  p.boundary_samples = [](int) { return interval_boundary(0.0, 10.0, /*left_only=*/true); };
  p.analytic = SmoothField{1, "1 + sin(x)", [y0](const std::vector<Jet>& x) {
                             return y0 + sin(x[0]);
                           }};
  return p;
}

ProblemSpec problem_boundary_layer(double nu) {
  const BLConstant blc = solve_bl_constant(nu);
  ProblemSpec p;
  p.name = "boundary-layer";
  p.kind = ProblemKind::BoundaryLayer;
  p.dim = 1;
  p.residual_order = 2;
  p.lo = Eigen::VectorXd::Constant(1, 0.0);
  p.hi = Eigen::VectorXd::Constant(1, 1.0);
  p.nu = nu;
  p.bl_c = blc.c;
  p.g_term = SmoothField{1, "1 - x", [](const std::vector<Jet>& x) { return 1.0 - x[0]; }};
  p.weight = hermite_weight_interval(0.0, 1.0);
  p.default_widths = {1, 20, 20, 1};
  p.default_points_1d = 100;
  p.boundary_value = [](const Eigen::VectorXd& x) { return x[0] == 0.0 ? 1.0 : 0.0; };
  p.boundary_samples = [](int) { return interval_boundary(0.0, 1.0, false); };
  const double c = blc.c;
  p.analytic = SmoothField{1, "2C/(1 + exp((x-1)C/nu)) - C",
                           [c, nu](const std::vector<Jet>& x) {
                             return 2.0 * c / (1.0 + exp((x[0] - 1.0) * (c / nu))) - c;
                           }};
  return p;
}

ProblemSpec problem_laplace() {
  ProblemSpec p = dirichlet_square_base();
  p.name = "laplace";
  p.kind = ProblemKind::Laplace;
  p.analytic = laplace_analytic();
  return p;
}

ProblemSpec problem_convection_diffusion(double alpha) {
  ProblemSpec p = dirichlet_square_base();
  p.name = "convection-diffusion";
  p.kind = ProblemKind::ConvectionDiffusion;
  p.alpha = alpha;
  p.analytic = SmoothField{
      2, "sin(pi x) sinh(pi y)/sinh(pi) - alpha sin(2 pi x) sin^2(pi y)",
      [alpha](const std::vector<Jet>& x) {
        const Jet s = sin(kPi * x[1]);
        return sin(kPi * x[0]) * sinh(kPi * x[1]) * (1.0 / std::sinh(kPi)) -
               alpha * sin(2.0 * kPi * x[0]) * (s * s);
      }};
  return p;
}

ProblemSpec problem_by_name(const std::string& name, double nu, double alpha) {
  if (name == "integral") return problem_integral();
  if (name == "boundary-layer") return problem_boundary_layer(nu);
  if (name == "laplace") return problem_laplace();
  if (name == "convection-diffusion") return problem_convection_diffusion(alpha);
  throw ConfigError("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
  return {"integral", "boundary-layer", "laplace", "convection-diffusion"};
}

TrialFunction make_default_trial(const ProblemSpec& p, const std::vector<int>& widths,
                                 uint64_t seed) {
  const std::vector<int>& w = widths.empty() ? p.default_widths : widths;
  if (w.front() != p.dim) throw ConfigError("network input width must match problem dimension");
  return TrialFunction{p.g_term, p.weight, mfn_init(w, seed)};
}

double reduced_solution_reference_integral(double x) {
  if (x <= 0.0) throw SingularOperation("bounded reduced solution defined for x > 0");
  return 1.0 + std::sin(x) / (1.0 - std::exp(-x));
}

double reduced_solution_reference_integral_limit0() { return 2.0; }

namespace detail {

double cd_velocity_u(double x, double y) { return y * y * std::cos(x); }

double cd_velocity_v(double x, double y) { return y * y * y * std::sin(x) / 3.0; }

double cd_source(double x, double y, double alpha) {
  const double sp = std::sinh(kPi);
  const double u = cd_velocity_u(x, y);
  const double v = cd_velocity_v(x, y);
  const double spy = std::sin(kPi * y);
  return u * kPi * std::cos(kPi * x) * std::sinh(kPi * y) / sp +
         v * kPi * std::sin(kPi * x) * std::cosh(kPi * y) / sp +
         alpha * (2.0 * kPi * kPi * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y) -
                  4.0 * kPi * kPi * std::sin(2.0 * kPi * x) * spy * spy) -
         alpha * (2.0 * kPi * y * y * std::cos(x) * std::cos(2.0 * kPi * x) * spy * spy +
                  kPi / 3.0 * y * y * y * std::sin(x) * std::sin(2.0 * kPi * x) *
                      std::sin(2.0 * kPi * y));
}

}  // namespace detail

double residual_at(const ProblemSpec& p, const TrialFunction& t, const Eigen::VectorXd& x) {
  auto field = [&](int axis, int order) { return trial_axis_jet(t, x, axis, order); };
  return apply_residual<Jet>(p, field, x).value();
}

double residual_of_field(const ProblemSpec& p, const SmoothField& field,
                         const Eigen::VectorXd& x) {
  auto f = [&](int axis, int order) { return field.axis_jet(x, axis, order); };
  return apply_residual<Jet>(p, f, x).value();
}

TracedJet residual_traced(const ProblemSpec& p, const TrialFunction& t,
                          std::span<const TracedJet> params, const Eigen::VectorXd& x,
                          AdjointTrace& trace) {
  auto field = [&](int axis, int order) {
    if (order != trace.order()) throw ConfigError("trace order must match the residual order");
    return trial_axis_jet(t, params, x, axis, trace);
  };
  return apply_residual<TracedJet>(p, field, x);
}

}  // namespace cmfn
