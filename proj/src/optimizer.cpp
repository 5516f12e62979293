#include "cmfn/optimizer.hpp"

#include <cmath>

namespace cmfn {

void LbfgsConfig::validate() const {
  if (memory < 1) throw ConfigError("lbfgs memory must be >= 1");
  if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
    throw ConfigError("need 0 < c1 < c2 < 1");
  if (max_iters < 0 || max_line_search_steps < 1) throw ConfigError("invalid iteration limits");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::GradTol: return "grad_tol";
    case StopReason::LossTol: return "loss_tol";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::LineSearchFailure: return "line_search_failure";
  }
  return "?";
}

void LbfgsState::push(const Eigen::VectorXd& s_new, const Eigen::VectorXd& y_new) {
  if (s_new.dot(y_new) <= 0.0) return;  // curvature violated, skip the pair
  s.push_back(s_new);
  y.push_back(y_new);
  while (static_cast<int>(s.size()) > memory) {
    s.pop_front();
    y.pop_front();
  }
}

Eigen::VectorXd two_loop_direction(const LbfgsState& state, const Eigen::VectorXd& grad) {
  const int m = static_cast<int>(state.s.size());
  if (m == 0) return -grad;

  Eigen::VectorXd q = grad;
  std::vector<double> alpha(m), rho(m);
  for (int i = m - 1; i >= 0; --i) {
    rho[i] = 1.0 / state.s[i].dot(state.y[i]);
    alpha[i] = rho[i] * state.s[i].dot(q);
    q -= alpha[i] * state.y[i];
  }
  const double gamma = state.s[m - 1].dot(state.y[m - 1]) / state.y[m - 1].dot(state.y[m - 1]);
  Eigen::VectorXd r = gamma * q;
  for (int i = 0; i < m; ++i) {
    const double beta = rho[i] * state.y[i].dot(r);
    r += (alpha[i] - beta) * state.s[i];
  }
  return -r;
}

namespace {

// Minimizer of the cubic through (a, fa, dfa) and (b, fb, dfb); falls back to
// bisection when the interpolant is degenerate or lands outside the bracket.
double cubic_min(double a, double fa, double dfa, double b, double fb, double dfb) {
  const double d1 = dfa + dfb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - dfa * dfb;
  if (disc < 0.0) return 0.5 * (a + b);
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  double t = b - (b - a) * (dfb + d2 - d1) / (dfb - dfa + 2.0 * d2);
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  double f = 0.0;
  Eigen::VectorXd x, g;
  int evals = 0;
};

// Strong Wolfe line search: bracketing phase plus zoom with cubic
// interpolation.
LineSearchResult line_search(const ObjectiveFn& fg, const Eigen::VectorXd& x0, double f0,
                             const Eigen::VectorXd& g0, const Eigen::VectorXd& d,
                             const LbfgsConfig& cfg) {
  LineSearchResult res;
  const double dphi0 = g0.dot(d);
  if (dphi0 >= 0.0) return res;  // not a descent direction

  const double c1 = cfg.wolfe_c1, c2 = cfg.wolfe_c2;
  Eigen::VectorXd g(x0.size());

  auto eval = [&](double a, double& phi, double& dphi, Eigen::VectorXd& x_out) {
    x_out = x0 + a * d;
    phi = fg(x_out, g);
    dphi = g.dot(d);
    ++res.evals;
  };

  auto accept = [&](double a, double phi, const Eigen::VectorXd& x_at) {
    res.ok = true;
    res.alpha = a;
    res.f = phi;
    res.x = x_at;
    res.g = g;
  };

  double a_prev = 0.0, phi_prev = f0, dphi_prev = dphi0;
  double a = 1.0;
  Eigen::VectorXd x_at;

  double a_lo = 0.0, a_hi = 0.0, phi_lo = f0, phi_hi = 0.0, dphi_lo = dphi0, dphi_hi = 0.0;
  bool bracketed = false;

  while (res.evals < cfg.max_line_search_steps) {
    double phi, dphi;
    eval(a, phi, dphi, x_at);
    if (!std::isfinite(phi)) {
      a = 0.5 * (a_prev + a);
      continue;
    }
    if (phi > f0 + c1 * a * dphi0 || (res.evals > 1 && phi >= phi_prev)) {
      a_lo = a_prev; phi_lo = phi_prev; dphi_lo = dphi_prev;
      a_hi = a; phi_hi = phi; dphi_hi = dphi;
      bracketed = true;
      break;
    }
    if (std::abs(dphi) <= -c2 * dphi0) {
      accept(a, phi, x_at);
      return res;
    }
    if (dphi >= 0.0) {
      a_lo = a; phi_lo = phi; dphi_lo = dphi;
      a_hi = a_prev; phi_hi = phi_prev; dphi_hi = dphi_prev;
      bracketed = true;
      break;
    }
    a_prev = a; phi_prev = phi; dphi_prev = dphi;
    a = std::min(2.0 * a, 1e10);
  }
  if (!bracketed) return res;

  // zoom
  while (res.evals < cfg.max_line_search_steps) {
    const double a_j = cubic_min(a_lo, phi_lo, dphi_lo, a_hi, phi_hi, dphi_hi);
    if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo))) break;
    double phi, dphi;
    eval(a_j, phi, dphi, x_at);
    if (!std::isfinite(phi) || phi > f0 + c1 * a_j * dphi0 || phi >= phi_lo) {
      a_hi = a_j; phi_hi = phi; dphi_hi = dphi;
    } else {
      if (std::abs(dphi) <= -c2 * dphi0) {
        accept(a_j, phi, x_at);
        return res;
      }
      if (dphi * (a_hi - a_lo) >= 0.0) {
        a_hi = a_lo; phi_hi = phi_lo; dphi_hi = dphi_lo;
      }
      a_lo = a_j; phi_lo = phi; dphi_lo = dphi;
    }
  }
  return res;
}

}  // namespace

std::pair<Eigen::VectorXd, OptimReport> minimize(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                                                 const LbfgsConfig& cfg) {
  cfg.validate();
  OptimReport report;

  Eigen::VectorXd x = x0;
  Eigen::VectorXd g(x.size());
  double f = fg(x, g);
  if (!std::isfinite(f)) throw NumericFault("objective not finite at the initial point", "f(x0)");

  report.loss.push_back(f);
  report.grad_norm.push_back(g.lpNorm<Eigen::Infinity>());

  LbfgsState state;
  state.memory = cfg.memory;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) {
      report.reason = StopReason::GradTol;
      return {x, report};
    }

    const Eigen::VectorXd d = two_loop_direction(state, g);
    const double dphi0 = g.dot(d);
    LineSearchResult ls = line_search(fg, x, f, g, d, cfg);
    if (!ls.ok) {
      // No acceptable step. If there was no meaningful descent left at
      // floating-point scale, this is an objective stall, not a failure.
      report.reason = std::abs(dphi0) <= 1e-14 * std::max(1.0, std::abs(f))
                          ? StopReason::LossTol
                          : StopReason::LineSearchFailure;
      return {x, report};
    }

    state.push(ls.x - x, ls.g - g);
    const double f_prev = f;
    x = ls.x;
    f = ls.f;
    g = ls.g;
    ++report.iterations;
    report.loss.push_back(f);
    report.grad_norm.push_back(g.lpNorm<Eigen::Infinity>());
    report.step.push_back(ls.alpha);

    // gradient convergence outranks an objective stall
    if (g.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) {
      report.reason = StopReason::GradTol;
      return {x, report};
    }
    if (f_prev - f <= cfg.loss_tol * std::max(1.0, std::abs(f))) {
      report.reason = StopReason::LossTol;
      return {x, report};
    }
  }
  report.reason = report.iterations == 0 && report.grad_norm.front() <= cfg.grad_tol
                      ? StopReason::GradTol
                      : StopReason::MaxIters;
  if (g.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) report.reason = StopReason::GradTol;
  return {x, report};
}

}  // namespace cmfn
