#include "cmfn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace cmfn {

namespace {

int default_grid(int dim, int grid_n) {
  if (grid_n > 0) return grid_n;
  return dim == 1 ? 1001 : 101;
}

double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

std::string grid_label(int dim, int n) {
  return dim == 1 ? "uniform-1d " + std::to_string(n)
                  : "uniform-2d " + std::to_string(n) + "x" + std::to_string(n);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void fmt17(std::ofstream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

ErrorReport l2_error_impl(const std::function<double(const Eigen::VectorXd&)>& f,
                          const SmoothField& analytic, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, int grid_n) {
  const int dim = static_cast<int>(lo.size());
  const int n = default_grid(dim, grid_n);
  ErrorReport report;
  report.grid = grid_label(dim, n);

  double acc = 0.0, wsum = 0.0;
  if (dim == 1) {
    Eigen::VectorXd x(1);
    for (int i = 0; i < n; ++i) {
      x[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / (n - 1);
      const double e = analytic.at(x) - f(x);
      const double w = trap_weight(i, n);
      acc += w * e * e;
      wsum += w;
      report.max_error = std::max(report.max_error, std::abs(e));
      ++report.n_points;
    }
  } else {
    Eigen::VectorXd x(2);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        x[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / (n - 1);
        x[1] = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) / (n - 1);
        const double e = analytic.at(x) - f(x);
        const double w = trap_weight(i, n) * trap_weight(j, n);
        acc += w * e * e;
        wsum += w;
        report.max_error = std::max(report.max_error, std::abs(e));
        ++report.n_points;
      }
    }
  }
  report.l2_error = std::sqrt(acc / wsum);
  return report;
}

}  // namespace

ErrorReport l2_error(const TrialFunction& t, const SmoothField& analytic,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int grid_n) {
  auto f = [&t](const Eigen::VectorXd& x) { return trial_axis_jet(t, x, -1, 0).value(); };
  return l2_error_impl(f, analytic, lo, hi, grid_n);
}

ErrorReport l2_error_fn(const std::function<double(const Eigen::VectorXd&)>& f,
                        const SmoothField& analytic, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi, int grid_n) {
  return l2_error_impl(f, analytic, lo, hi, grid_n);
}

double rms_error_at_points(const std::function<double(const Eigen::VectorXd&)>& f,
                           const SmoothField& analytic, std::vector<Eigen::VectorXd> points) {
  if (points.empty()) throw ConfigError("empty point list");
  std::sort(points.begin(), points.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index d = 0; d < a.size(); ++d) {
      if (a[d] != b[d]) return a[d] < b[d];
    }
    return false;
  });
  double acc = 0.0;
  for (const Eigen::VectorXd& x : points) {
    const double e = analytic.at(x) - f(x);
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(points.size()));
}

std::vector<DistributionRow> error_distribution(const TrialFunction& t,
                                                const SmoothField& analytic,
                                                const Eigen::VectorXd& lo,
                                                const Eigen::VectorXd& hi, int grid_n) {
  const int dim = static_cast<int>(lo.size());
  const int n = default_grid(dim, grid_n);
  std::vector<DistributionRow> rows;

  auto push = [&](const Eigen::VectorXd& x) {
    DistributionRow row;
    row.x = x;
    row.exact = analytic.at(x);
    row.model = trial_axis_jet(t, x, -1, 0).value();
    row.error = row.exact - row.model;
    row.bulk = 0.0;
    row.reduced = 0.0;
    if (dim == 1) {
      std::vector<Jet> xj{Jet::constant(x[0], 0)};
      const double w = t.weight(xj).value();
      const double nval = mfn_forward(t.net, xj)[0].value();
      row.reduced = nval;
      row.bulk = w * nval;
    }
    rows.push_back(std::move(row));
  };

  if (dim == 1) {
    Eigen::VectorXd x(1);
    for (int i = 0; i < n; ++i) {
      x[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / (n - 1);
      push(x);
    }
  } else {
    Eigen::VectorXd x(2);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        x[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / (n - 1);
        x[1] = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) / (n - 1);
        push(x);
      }
  }
  return rows;
}

void write_distribution_csv(const std::string& path, const std::vector<DistributionRow>& rows,
                            int dim) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  if (dim == 1)
    out << "x,exact,model,error,bulk,reduced\n";
  else
    out << "x,y,exact,model,error\n";
  for (const DistributionRow& r : rows) {
    fmt17(out, r.x[0]);
    if (dim == 2) {
      out << ',';
      fmt17(out, r.x[1]);
    }
    out << ',';
    fmt17(out, r.exact);
    out << ',';
    fmt17(out, r.model);
    out << ',';
    fmt17(out, r.error);
    if (dim == 1) {
      out << ',';
      fmt17(out, r.bulk);
      out << ',';
      fmt17(out, r.reduced);
    }
    out << '\n';
  }
}

DerivativeSweep derivative_sweep(const TrialFunction& t, const ProblemSpec& p, int max_order,
                                 int grid_n) {
  if (p.dim != 1) throw UnsupportedOperation("derivative sweep needs a 1D problem");
  if (!p.analytic) throw UnsupportedOperation("derivative sweep needs a closed-form solution");
  if (max_order < 0) throw ConfigError("derivative sweep order must be >= 0");
  const int n = default_grid(1, grid_n);

  DerivativeSweep sweep;
  if (max_order == 0)
    sweep.orders = {0};
  else
    for (int k = 1; k <= max_order; ++k) sweep.orders.push_back(k);

  const int jet_order = std::max(1, max_order);
  std::vector<double> num(sweep.orders.size(), 0.0), den(sweep.orders.size(), 0.0);
  Eigen::VectorXd x(1);
  for (int i = 0; i < n; ++i) {
    x[0] = p.lo[0] + (p.hi[0] - p.lo[0]) * static_cast<double>(i) / (n - 1);
    const Jet yhat = trial_axis_jet(t, x, 0, jet_order);
    const Jet yref = p.analytic->axis_jet(x, 0, jet_order);
    for (size_t s = 0; s < sweep.orders.size(); ++s) {
      const int k = sweep.orders[s];
      const double d = yhat.derivative(k) - yref.derivative(k);
      num[s] += d * d;
      den[s] += yref.derivative(k) * yref.derivative(k);
    }
  }
  for (size_t s = 0; s < sweep.orders.size(); ++s)
    sweep.rel_l2_error.push_back(den[s] > 0.0 ? std::sqrt(num[s] / den[s]) : std::sqrt(num[s]));
  return sweep;
}

void write_sweep_csv(const std::string& path, const DerivativeSweep& sweep) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "order,rel_l2_error\n";
  for (size_t i = 0; i < sweep.orders.size(); ++i) {
    out << sweep.orders[i] << ',';
    fmt17(out, sweep.rel_l2_error[i]);
    out << '\n';
  }
}

AblationVariant ablation_variant_from_string(const std::string& s) {
  if (s == "g-const") return AblationVariant::GConst;
  if (s == "w-linear") return AblationVariant::WLinear;
  if (s == "w-squared") return AblationVariant::WSquared;
  throw ConfigError("unknown ablation variant: " + s + " (g-const, w-linear, w-squared)");
}

std::string to_string(AblationVariant v) {
  switch (v) {
    case AblationVariant::GConst: return "g-const";
    case AblationVariant::WLinear: return "w-linear";
    case AblationVariant::WSquared: return "w-squared";
  }
  return "?";
}

AblationResult ablation_run(const std::string& problem, AblationVariant variant,
                            const std::vector<uint64_t>& seeds, const TrainConfig& base_cfg) {
  const bool ok = (problem == "integral" &&
                   (variant == AblationVariant::GConst || variant == AblationVariant::WLinear)) ||
                  (problem == "boundary-layer" && variant == AblationVariant::WSquared);
  if (!ok)
    throw ConfigError("ablation variant " + to_string(variant) + " does not apply to " + problem);
  if (seeds.empty()) throw ConfigError("ablation needs at least one seed");

  TrainConfig cfg = base_cfg;
  cfg.problem = problem;
  const ProblemSpec p = problem_by_name(problem, cfg.nu, cfg.alpha);

  AblationResult result;
  for (uint64_t seed : seeds) {
    cfg.seed = seed;
    auto [baseline, base_rep] = train(cfg);
    result.baseline_errors.push_back(l2_error(baseline, *p.analytic, p.lo, p.hi).l2_error);

    TrialFunction start = make_default_trial(p, cfg.widths, seed);
    switch (variant) {
      case AblationVariant::GConst:
        start.g_term = SmoothField{1, "1", [](const std::vector<Jet>& x) {
                                     return Jet::constant(1.0, x[0].order());
                                   }};
        break;
      case AblationVariant::WLinear:
        start.weight = SmoothField{1, "x", [](const std::vector<Jet>& x) { return x[0]; }};
        break;
      case AblationVariant::WSquared:
        start.weight = SmoothField{1, "x^2 (1 - x)", [](const std::vector<Jet>& x) {
                                     return x[0] * x[0] * (1.0 - x[0]);
                                   }};
        break;
    }
    auto [degraded, var_rep] = train(p, start, default_collocation(p, cfg), cfg);
    result.variant_errors.push_back(l2_error(degraded, *p.analytic, p.lo, p.hi).l2_error);
  }

  result.median_baseline = median(result.baseline_errors);
  result.median_variant = median(result.variant_errors);
  result.ratio = result.median_variant / result.median_baseline;
  return result;
}

void write_ablation_csv(const std::string& path, const AblationResult& result,
                        const std::vector<uint64_t>& seeds, const std::string& problem,
                        AblationVariant variant) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "problem,variant,seed,baseline_l2_error,variant_l2_error\n";
  for (size_t i = 0; i < seeds.size(); ++i) {
    out << problem << ',' << to_string(variant) << ',' << seeds[i] << ',';
    fmt17(out, result.baseline_errors[i]);
    out << ',';
    fmt17(out, result.variant_errors[i]);
    out << '\n';
  }
  out << problem << ',' << to_string(variant) << ",median,";
  fmt17(out, result.median_baseline);
  out << ',';
  fmt17(out, result.median_variant);
  out << "\nratio,";
  fmt17(out, result.ratio);
  out << "\n";
}

}  // namespace cmfn
