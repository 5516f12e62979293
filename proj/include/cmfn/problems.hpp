#ifndef CMFN_PROBLEMS_HPP
#define CMFN_PROBLEMS_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmfn/constraints.hpp"

namespace cmfn {

enum class ProblemKind { Integral, BoundaryLayer, Laplace, ConvectionDiffusion };

/// Root of 1 - 2/(1+C) = exp(-C/nu); fixes the boundary-layer closed form.
struct BLConstant {
  double nu;
  double c;
};

BLConstant solve_bl_constant(double nu);

/// Differential problem plus its default model recipe and (when available)
/// the closed-form solution used for error measurement.
struct ProblemSpec {
  std::string name;
  ProblemKind kind;
  int dim;
  int residual_order;  // highest input-derivative order in the residual
  Eigen::VectorXd lo, hi;

  SmoothField g_term;
  SmoothField weight;
  std::vector<int> default_widths;
  int default_points_1d = 0;  // 1D collocation count
  int default_grid_2d = 0;    // per-axis mesh vertices in 2D

  std::function<double(const Eigen::VectorXd&)> boundary_value;
  std::function<std::vector<Eigen::VectorXd>(int)> boundary_samples;

  std::optional<SmoothField> analytic;

  double y0 = 1.0;
  double nu = 0.0;
  double alpha = 0.0;
  double bl_c = 0.0;
};

ProblemSpec problem_integral();
ProblemSpec problem_boundary_layer(double nu);
ProblemSpec problem_laplace();
ProblemSpec problem_convection_diffusion(double alpha = 0.1);

/// Lookup by CLI name: integral, boundary-layer, laplace, convection-diffusion.
ProblemSpec problem_by_name(const std::string& name, double nu = 0.5, double alpha = 0.1);
std::vector<std::string> problem_names();

/// Default trial function for the problem; widths may override the recipe.
TrialFunction make_default_trial(const ProblemSpec& p, const std::vector<int>& widths,
                                 uint64_t seed);

/// The unique bounded reduced solution of the integral problem,
/// N*(x) = 1 + sin(x)/(1 - exp(-x)) for x > 0.
double reduced_solution_reference_integral(double x);
/// Its limit as x -> 0+.
double reduced_solution_reference_integral_limit0();

namespace detail {
// Convection-diffusion manufactured data.
double cd_velocity_u(double x, double y);
double cd_velocity_v(double x, double y);
double cd_source(double x, double y, double alpha);
}  // namespace detail

/// Applies the problem's residual operator to any field presented as an
/// axis-jet evaluator f(axis, order) -> S. Instantiated with plain jets for
/// evaluation and traced jets for training.
template <class S, class F>
S apply_residual(const ProblemSpec& p, F&& field, const Eigen::VectorXd& x) {
  switch (p.kind) {
    case ProblemKind::Integral: {
      S yj = field(0, 1);
      return extract(yj, 1) - std::cos(x[0]);
    }
    case ProblemKind::BoundaryLayer: {
      S yj = field(0, 2);
      return extract(yj, 0) * extract(yj, 1) - p.nu * extract(yj, 2);
    }
    case ProblemKind::Laplace: {
      S jx = field(0, 2);
      S jy = field(1, 2);
      return extract(jx, 2) + extract(jy, 2);
    }
    case ProblemKind::ConvectionDiffusion: {
      S jx = field(0, 2);
      S jy = field(1, 2);
      const double u = detail::cd_velocity_u(x[0], x[1]);
      const double v = detail::cd_velocity_v(x[0], x[1]);
      const double f = detail::cd_source(x[0], x[1], p.alpha);
      return u * extract(jx, 1) + v * extract(jy, 1) - (extract(jx, 2) + extract(jy, 2)) - f;
    }
  }
  throw ConfigError("unknown problem kind");
}

/// Residual of the composed trial at a point (plain evaluation).
double residual_at(const ProblemSpec& p, const TrialFunction& t, const Eigen::VectorXd& x);

/// Residual of a closed-form field substituted for the solution, bypassing
/// the network; the manufactured-solution check.
double residual_of_field(const ProblemSpec& p, const SmoothField& field, const Eigen::VectorXd& x);

/// Traced residual for gradient computation.
TracedJet residual_traced(const ProblemSpec& p, const TrialFunction& t,
                          std::span<const TracedJet> params, const Eigen::VectorXd& x,
                          AdjointTrace& trace);

}  // namespace cmfn

#endif
