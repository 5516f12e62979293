#ifndef CMFN_OPTIMIZER_HPP
#define CMFN_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "cmfn/errors.hpp"

namespace cmfn {

struct LbfgsConfig {
  int memory = 10;
  int max_iters = 5000;
  double grad_tol = 1e-8;   // stopping ||grad||_inf
  double loss_tol = 1e-12;  // relative objective stall
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search_steps = 50;

  void validate() const;
};

enum class StopReason { GradTol, LossTol, MaxIters, LineSearchFailure };

std::string to_string(StopReason r);

struct OptimReport {
  std::vector<double> loss;       // per accepted iterate, loss[0] at x0
  std::vector<double> grad_norm;  // inf-norm, aligned with loss
  std::vector<double> step;       // accepted step lengths, one per iteration
  StopReason reason = StopReason::MaxIters;
  int iterations = 0;
};

/// Objective callback: returns f(x) and fills grad. Must be deterministic.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsState {
  std::deque<Eigen::VectorXd> s;  // parameter deltas
  std::deque<Eigen::VectorXd> y;  // gradient deltas
  int memory = 10;

  /// Stores the pair unless it violates the curvature condition s'y > 0.
  void push(const Eigen::VectorXd& s_new, const Eigen::VectorXd& y_new);
};

/// Two-loop recursion: -H * grad with gamma = s'y / y'y scaling from the
/// newest pair; steepest descent with empty history.
Eigen::VectorXd two_loop_direction(const LbfgsState& state, const Eigen::VectorXd& grad);

std::pair<Eigen::VectorXd, OptimReport> minimize(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                                                 const LbfgsConfig& cfg = {});

}  // namespace cmfn

#endif
