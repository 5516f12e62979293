#include "cmfn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace cmfn {

CollocationSet uniform_points_1d(double a, double b, int n) {
  if (n < 2 || a >= b) throw ConfigError("uniform_points_1d needs n >= 2 and a < b");
  CollocationSet set;
  set.provenance = "uniform-1d " + std::to_string(n);
  set.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd p(1);
    p[0] = a + (b - a) * static_cast<double>(i) / (n - 1);
    set.points.push_back(p);
  }
  return set;
}

CollocationSet grid_points_2d(int nx, int ny, const Eigen::VectorXd& lo,
                              const Eigen::VectorXd& hi) {
  if (nx < 2 || ny < 2) throw ConfigError("grid_points_2d needs nx, ny >= 2");
  if (lo.size() != 2 || hi.size() != 2 || lo[0] >= hi[0] || lo[1] >= hi[1])
    throw ConfigError("grid_points_2d needs a valid 2D box");
  CollocationSet set;
  set.provenance = "grid-2d " + std::to_string(nx) + "x" + std::to_string(ny);
  set.points.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Eigen::VectorXd p(2);
      p[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / (nx - 1);
      p[1] = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) / (ny - 1);
      set.points.push_back(p);
    }
  }
  return set;
}

double loss(const TrialFunction& t, const ProblemSpec& p, const CollocationSet& colloc) {
  if (colloc.points.empty()) throw ConfigError("empty collocation set");
  double acc = 0.0;
  for (const Eigen::VectorXd& x : colloc.points) {
    const double r = residual_at(p, t, x);
    acc += r * r;
  }
  return acc;
}

std::pair<double, Eigen::VectorXd> loss_grad(const TrialFunction& t, const ProblemSpec& p,
                                             const CollocationSet& colloc) {
  if (colloc.points.empty()) throw ConfigError("empty collocation set");
  const Eigen::VectorXd theta = get_params(t.net);
  const int n_params = static_cast<int>(theta.size());

  AdjointTrace trace(p.residual_order);
  std::vector<TracedJet> leaves(n_params);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params);
  double total = 0.0;

  for (const Eigen::VectorXd& x : colloc.points) {
    trace.clear();
    for (int i = 0; i < n_params; ++i) leaves[i] = trace.leaf(theta[i]);
    TracedJet r = residual_traced(p, t, std::span<const TracedJet>(leaves), x, trace);
    const double rv = r.value();
    if (!std::isfinite(rv))
      throw NumericFault("non-finite residual at collocation point",
                         "(" + std::to_string(x[0]) +
                             (x.size() > 1 ? "," + std::to_string(x[1]) : "") + ")");
    total += rv * rv;
    grad += trace.gradient(r, 2.0 * rv);  // d(r^2)/dtheta, summed in point order
  }
  return {total, grad};
}

CollocationSet default_collocation(const ProblemSpec& p, const TrainConfig& cfg) {
  if (p.dim == 1) {
    const int n = cfg.points_1d > 0 ? cfg.points_1d : p.default_points_1d;
    return uniform_points_1d(p.lo[0], p.hi[0], n);
  }
  const int nx = cfg.grid_nx > 0 ? cfg.grid_nx : p.default_grid_2d;
  const int ny = cfg.grid_ny > 0 ? cfg.grid_ny : p.default_grid_2d;
  return grid_points_2d(nx, ny, p.lo, p.hi);
}

std::pair<TrialFunction, TrainReport> train(const ProblemSpec& p, const TrialFunction& start,
                                            const CollocationSet& colloc,
                                            const TrainConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();

  std::optional<std::pair<TrialFunction, TrainReport>> best;
  bool any_success = false;
  int attempts_made = 0;

  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    ++attempts_made;
    TrialFunction trial = start;
    const uint64_t seed = cfg.seed + static_cast<uint64_t>(attempt);
    if (attempt > 0) trial.net = mfn_init(start.net.widths, seed, start.net.activation);
    if (cfg.scale_inputs) {
      trial.net.in_scale = 2.0 * (p.hi - p.lo).cwiseInverse();
      trial.net.in_shift = -(p.hi + p.lo).cwiseQuotient(p.hi - p.lo);
    }

    ObjectiveFn fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
      TrialFunction tv = trial;
      tv.net = set_params(tv.net, v);
      auto [f, gv] = loss_grad(tv, p, colloc);
      g = gv;
      return f;
    };

    auto [x_star, rep] = minimize(fg, get_params(trial.net), cfg.optimizer);
    trial.net = set_params(trial.net, x_star);

    TrainReport report;
    report.final_loss = loss(trial, p, colloc);
    report.mean_squared_residual = report.final_loss / static_cast<double>(colloc.points.size());
    report.iterations = rep.iterations;
    report.loss_trajectory = rep.loss;
    report.seed_used = seed;
    report.attempts = attempt + 1;
    report.termination = to_string(rep.reason);

    if (!best || report.final_loss < best->second.final_loss) best = {trial, report};
    if (rep.reason != StopReason::LineSearchFailure) {
      any_success = true;
      break;
    }
  }

  best->second.attempts = attempts_made;
  best->second.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!any_success)
    throw TrainingFailure("all training attempts ended in line-search failure (best loss " +
                          std::to_string(best->second.final_loss) + ")");
  return *best;
}

std::pair<TrialFunction, TrainReport> train(const TrainConfig& cfg) {
  const ProblemSpec p = problem_by_name(cfg.problem, cfg.nu, cfg.alpha);
  TrialFunction trial = make_default_trial(p, cfg.widths, cfg.seed);
  const CollocationSet colloc = default_collocation(p, cfg);
  return train(p, trial, colloc, cfg);
}

}  // namespace cmfn
