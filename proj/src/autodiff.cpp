#include "cmfn/autodiff.hpp"

#include <cmath>
#include <vector>

namespace cmfn {

namespace {

TracedJet run_program(const LossProgram& program, AdjointTrace& trace,
                      const Eigen::VectorXd& params) {
  std::vector<TracedJet> leaves;
  leaves.reserve(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) leaves.push_back(trace.leaf(params[i]));
  return program(trace, std::span<const TracedJet>(leaves));
}

}  // namespace

double eval_program(const LossProgram& program, const Eigen::VectorXd& params, int order) {
  AdjointTrace trace(order);
  return run_program(program, trace, params).value();
}

Eigen::VectorXd grad(const LossProgram& program, const Eigen::VectorXd& params, int order,
                     double* value_out) {
  AdjointTrace trace(order);
  TracedJet out = run_program(program, trace, params);
  if (value_out) *value_out = out.value();
  return trace.gradient(out);
}

double gradcheck(const LossProgram& program, const Eigen::VectorXd& params, double fd_step,
                 int order) {
  if (fd_step <= 0.0) throw ConfigError("gradcheck step must be positive");
  const Eigen::VectorXd g = grad(program, params, order);
  double worst = 0.0;
  Eigen::VectorXd p = params;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double x = params[i];
    p[i] = x + fd_step;
    const double fp = eval_program(program, p, order);
    p[i] = x - fd_step;
    const double fm = eval_program(program, p, order);
    p[i] = x;
    const double fd = (fp - fm) / (2.0 * fd_step);
    const double scale = std::max(std::abs(g[i]), std::abs(fd));
    const double err = scale < 1e-8 ? std::abs(g[i] - fd) : std::abs(g[i] - fd) / scale;
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace cmfn
