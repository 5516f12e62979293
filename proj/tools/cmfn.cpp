// cmfn: train constrained feedforward models on boundary-value problems and
// report their accuracy.
//
// Exit codes: 0 success, 1 usage or unsupported request, 2 numerical failure
// (training or gradient check).
//
// Artifacts go to --out, defaulting to $CMFN_RUNS_DIR/<problem>-seed<seed>
// (CMFN_RUNS_DIR itself defaults to ./runs).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmfn/evaluation.hpp"
#include "cmfn/serialize.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct CommonFlags {
  std::string problem;
  std::string hidden;  // comma-separated hidden widths, e.g. "20,20"
  int points = 0;
  std::string grid;  // "NXxNY"
  uint64_t seed = 0;
  int retries = 3;
  std::string out;
  int max_iters = 5000;
  bool scale_inputs = false;
  double nu = 0.5;
  double alpha = 0.1;
};

std::vector<int> parse_widths(const std::string& hidden, int dim) {
  std::vector<int> widths{dim};
  std::stringstream ss(hidden);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      widths.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw cmfn::ConfigError("bad --hidden entry '" + item + "'");
    }
    if (widths.back() <= 0) throw cmfn::ConfigError("hidden widths must be positive");
  }
  if (widths.size() == 1) throw cmfn::ConfigError("--hidden needs at least one layer width");
  widths.push_back(1);
  return widths;
}

std::pair<int, int> parse_grid(const std::string& grid) {
  const size_t x = grid.find('x');
  if (x == std::string::npos) throw cmfn::ConfigError("--grid expects NXxNY, e.g. 30x30");
  try {
    const int nx = std::stoi(grid.substr(0, x));
    const int ny = std::stoi(grid.substr(x + 1));
    if (nx < 2 || ny < 2) throw cmfn::ConfigError("--grid axes need at least 2 vertices");
    return {nx, ny};
  } catch (const cmfn::ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw cmfn::ConfigError("--grid expects NXxNY, e.g. 30x30");
  }
}

std::vector<uint64_t> parse_seeds(const std::string& seeds) {
  std::vector<uint64_t> out;
  std::stringstream ss(seeds);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw cmfn::ConfigError("bad --seeds entry '" + item + "'");
    }
  }
  if (out.empty()) throw cmfn::ConfigError("--seeds needs at least one entry");
  return out;
}

fs::path run_dir(const CommonFlags& flags) {
  if (!flags.out.empty()) return flags.out;
  const char* root = std::getenv("CMFN_RUNS_DIR");
  return fs::path(root ? root : "runs") /
         (flags.problem + "-seed" + std::to_string(flags.seed));
}

cmfn::TrainConfig make_train_config(const CommonFlags& flags, const cmfn::ProblemSpec& p) {
  cmfn::TrainConfig cfg;
  cfg.problem = flags.problem;
  if (!flags.hidden.empty()) cfg.widths = parse_widths(flags.hidden, p.dim);
  cfg.seed = flags.seed;
  cfg.points_1d = flags.points;
  if (!flags.grid.empty()) std::tie(cfg.grid_nx, cfg.grid_ny) = parse_grid(flags.grid);
  cfg.retries = flags.retries;
  cfg.scale_inputs = flags.scale_inputs;
  cfg.optimizer.max_iters = flags.max_iters;
  cfg.nu = flags.nu;
  cfg.alpha = flags.alpha;
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw cmfn::ConfigError("cannot open " + path.string() + " for writing");
  out << text;
}

void write_errors_csv(const fs::path& path, const std::vector<cmfn::DistributionRow>& rows,
                      int dim) {
  std::ofstream out(path);
  if (!out) throw cmfn::ConfigError("cannot open " + path.string() + " for writing");
  out << (dim == 1 ? "x,error\n" : "x,y,error\n");
  char buf[128];
  for (const cmfn::DistributionRow& r : rows) {
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g,", r.x[d]);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", r.error);
    out << buf;
  }
}

int cmd_solve(const CommonFlags& flags) {
  const cmfn::ProblemSpec p = cmfn::problem_by_name(flags.problem, flags.nu, flags.alpha);
  const cmfn::TrainConfig cfg = make_train_config(flags, p);

  const fs::path dir = run_dir(flags);
  fs::create_directories(dir);

  std::cout << "training " << p.name << " (seed " << cfg.seed << ")...\n";
  const auto [trial, train_rep] = cmfn::train(cfg);
  std::cout << "  final loss " << train_rep.final_loss << " after " << train_rep.iterations
            << " iterations (" << train_rep.termination << ", " << train_rep.attempts
            << " attempt(s), " << train_rep.wall_seconds << " s)\n";

  const cmfn::ErrorReport err = cmfn::l2_error(trial, *p.analytic, p.lo, p.hi);
  std::cout << "  L2 error " << err.l2_error << ", max error " << err.max_error << " on "
            << err.grid << "\n";

  const std::vector<cmfn::DistributionRow> rows =
      cmfn::error_distribution(trial, *p.analytic, p.lo, p.hi);
  cmfn::write_distribution_csv((dir / "solution.csv").string(), rows, p.dim);
  write_errors_csv(dir / "errors.csv", rows, p.dim);
  cmfn::save_params((dir / "params.json").string(), trial.net);
  write_text(dir / "report.json",
             cmfn::run_report_to_json(
                 cfg, train_rep, err,
                 {"report.json", "params.json", "solution.csv", "errors.csv"}));

  std::cout << "artifacts in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_gradcheck(const CommonFlags& flags, double fd_step) {
  const cmfn::ProblemSpec p = cmfn::problem_by_name(flags.problem, flags.nu, flags.alpha);
  const std::vector<int> widths = flags.hidden.empty()
                                      ? std::vector<int>{p.dim, 5, 5, 1}
                                      : parse_widths(flags.hidden, p.dim);
  cmfn::TrialFunction t = cmfn::make_default_trial(p, widths, flags.seed + 1);
  const cmfn::CollocationSet colloc =
      p.dim == 1 ? cmfn::uniform_points_1d(p.lo[0], p.hi[0], 12)
                 : cmfn::grid_points_2d(5, 5, p.lo, p.hi);

  const auto [f0, g] = cmfn::loss_grad(t, p, colloc);
  const Eigen::VectorXd theta = get_params(t.net);
  double worst = 0.0;
  for (int i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd tp = theta, tm = theta;
    tp[i] += fd_step;
    tm[i] -= fd_step;
    cmfn::TrialFunction a = t, b = t;
    a.net = set_params(std::move(a.net), tp);
    b.net = set_params(std::move(b.net), tm);
    const double fd = (cmfn::loss(a, p, colloc) - cmfn::loss(b, p, colloc)) / (2 * fd_step);
    worst = std::max(worst,
                     std::abs(g[i] - fd) / std::max({1.0, std::abs(fd), std::abs(g[i])}));
  }
  std::cout << "max relative gradient error " << worst << " (" << theta.size()
            << " parameters, fd step " << fd_step << ")\n";
  if (worst >= 1e-5) {
    std::cout << "FAIL: exceeds 1e-5; if the step is coarse, truncation error "
                 "dominates -- try --fd-step 1e-6\n";
    return kExitNumeric;
  }
  std::cout << "OK\n";
  return kExitOk;
}

int cmd_derivatives(const CommonFlags& flags, int order, const std::string& load) {
  const cmfn::ProblemSpec p = cmfn::problem_by_name(flags.problem, flags.nu, flags.alpha);
  if (p.dim != 1)
    throw cmfn::UnsupportedOperation("derivative sweeps need a 1D problem with a closed form");

  const fs::path dir = run_dir(flags);
  fs::create_directories(dir);

  cmfn::TrialFunction trial;
  if (!load.empty()) {
    std::cout << "loading parameters from " << load << " (no training)\n";
    cmfn::Mfn net = cmfn::load_params(load);
    trial = cmfn::make_default_trial(p, net.widths, net.seed);
    trial.net = std::move(net);
  } else {
    const cmfn::TrainConfig cfg = make_train_config(flags, p);
    std::cout << "training " << p.name << " (seed " << cfg.seed << ")...\n";
    const auto [t, rep] = cmfn::train(cfg);
    std::cout << "  final loss " << rep.final_loss << " (" << rep.termination << ")\n";
    trial = t;
  }

  const cmfn::DerivativeSweep sweep = cmfn::derivative_sweep(trial, p, order);
  const fs::path csv = dir / "derivatives.csv";
  cmfn::write_sweep_csv(csv.string(), sweep);
  for (size_t i = 0; i < sweep.orders.size(); ++i)
    std::cout << "  order " << sweep.orders[i] << ": relative L2 error "
              << sweep.rel_l2_error[i] << "\n";
  std::cout << "wrote " << csv.string() << "\n";
  return kExitOk;
}

int cmd_ablate(const CommonFlags& flags, const std::string& variant_name,
               const std::string& seeds_text) {
  const cmfn::AblationVariant variant = cmfn::ablation_variant_from_string(variant_name);
  const std::vector<uint64_t> seeds = parse_seeds(seeds_text);

  const cmfn::ProblemSpec p = cmfn::problem_by_name(flags.problem, flags.nu, flags.alpha);
  cmfn::TrainConfig cfg = make_train_config(flags, p);

  const fs::path dir = run_dir(flags);
  fs::create_directories(dir);

  std::cout << "ablating " << flags.problem << " with variant " << variant_name << " over "
            << seeds.size() << " seed(s)...\n";
  const cmfn::AblationResult res = cmfn::ablation_run(flags.problem, variant, seeds, cfg);
  const fs::path csv = dir / "ablation.csv";
  cmfn::write_ablation_csv(csv.string(), res, seeds, flags.problem, variant);
  std::cout << "  median baseline L2 error " << res.median_baseline << "\n"
            << "  median variant  L2 error " << res.median_variant << "\n"
            << "  ratio (variant / baseline) " << res.ratio << "\n"
            << "wrote " << csv.string() << "\n";
  return kExitOk;
}

std::string problem_list() {
  std::string s;
  for (const std::string& n : cmfn::problem_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained feedforward networks for boundary-value problems"};
  app.require_subcommand(1);

  CommonFlags flags;
  double fd_step = 1e-6;
  int order = 8;
  std::string load, variant = "g-const", seeds = "1,2,3,4,5";

  auto add_common = [&flags](CLI::App* cmd, bool training) {
    cmd->add_option("--problem", flags.problem, "Problem name: " + problem_list())->required();
    cmd->add_option("--hidden", flags.hidden, "Comma-separated hidden widths, e.g. 20,20");
    cmd->add_option("--seed", flags.seed, "Initialization seed");
    cmd->add_option("--nu", flags.nu, "Viscosity for boundary-layer");
    cmd->add_option("--alpha", flags.alpha, "Perturbation amplitude for convection-diffusion");
    if (training) {
      cmd->add_option("--points", flags.points, "1D collocation points (0: problem default)");
      cmd->add_option("--grid", flags.grid, "2D collocation mesh as NXxNY");
      cmd->add_option("--retries", flags.retries, "Reseeded retries after line-search failure");
      cmd->add_option("--out", flags.out, "Run directory (default $CMFN_RUNS_DIR/<problem>-seed<seed>)");
      cmd->add_option("--max-iters", flags.max_iters, "Optimizer iteration cap");
      cmd->add_flag("--scale-inputs", flags.scale_inputs, "Map the domain onto [-1, 1] per axis");
    }
  };

  CLI::App* solve = app.add_subcommand("solve", "Train a model and write its run artifacts");
  add_common(solve, true);

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "Compare the adjoint gradient with finite differences");
  add_common(gradcheck, false);
  gradcheck->add_option("--fd-step", fd_step, "Central-difference step (default 1e-6)");

  CLI::App* derivatives =
      app.add_subcommand("derivatives", "Relative L2 error of derivatives up to --order");
  add_common(derivatives, true);
  derivatives->add_option("--order", order, "Highest derivative order (1..8)")
      ->check(CLI::Range(1, 8));
  derivatives->add_option("--load", load, "Reuse params.json from a previous run (skips training)");

  CLI::App* ablate = app.add_subcommand("ablate", "Compare the default model with a degraded one");
  add_common(ablate, true);
  ablate->add_option("--variant", variant, "One of g-const, w-linear, w-squared");
  ablate->add_option("--seeds", seeds, "Comma-separated seed list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(flags);
    if (gradcheck->parsed()) return cmd_gradcheck(flags, fd_step);
    if (derivatives->parsed()) return cmd_derivatives(flags, order, load);
    if (ablate->parsed()) return cmd_ablate(flags, variant, seeds);
  } catch (const cmfn::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\nvalid problems: " << problem_list() << "\n";
    return kExitUsage;
  } catch (const cmfn::UnsupportedOperation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cmfn::TrainingFailure& e) {
    std::cerr << "training failed: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
