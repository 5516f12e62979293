#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cmfn/evaluation.hpp"

using cmfn::ErrorReport;
using cmfn::ProblemSpec;
using cmfn::SmoothField;
using cmfn::TrialFunction;

namespace {

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

int count_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("l2 error of a shifted field is the shift") {
  const ProblemSpec p = cmfn::problem_integral();
  for (double delta : {0.0, 0.5, 2.0}) {
    const ErrorReport rep = cmfn::l2_error_fn(
        [&](const Eigen::VectorXd& x) { return p.analytic->at(x) + delta; }, *p.analytic, p.lo,
        p.hi);
    CHECK(rep.l2_error == doctest::Approx(delta).epsilon(1e-12).scale(1.0));
    CHECK(rep.max_error == doctest::Approx(delta).epsilon(1e-12).scale(1.0));
    CHECK(rep.n_points == 1001);
  }
}

TEST_CASE("l2 error integrates a known profile") {
  // f - exact = sin(pi x / 10) on [0, 10]: mean square = 1/2 by symmetry,
  // and the trapezoid rule is near-exact on this smooth integrand
  const ProblemSpec p = cmfn::problem_integral();
  const ErrorReport rep = cmfn::l2_error_fn(
      [&](const Eigen::VectorXd& x) {
        return p.analytic->at(x) + std::sin(3.14159265358979323846 * x[0] / 10.0);
      },
      *p.analytic, p.lo, p.hi);
  CHECK(rep.l2_error == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK(rep.max_error == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("2D l2 error of a separable profile") {
  const ProblemSpec p = cmfn::problem_laplace();
  // error field sin(pi x) sin(pi y): mean square 1/4
  const ErrorReport rep = cmfn::l2_error_fn(
      [&](const Eigen::VectorXd& x) {
        return p.analytic->at(x) + std::sin(3.14159265358979323846 * x[0]) *
                                       std::sin(3.14159265358979323846 * x[1]);
      },
      *p.analytic, p.lo, p.hi);
  CHECK(rep.l2_error == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(rep.n_points == 101 * 101);
}

TEST_CASE("rms error is invariant under point reordering") {
  const ProblemSpec p = cmfn::problem_integral();
  std::vector<Eigen::VectorXd> pts;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) pts.push_back(vec1(u(rng)));
  auto f = [&](const Eigen::VectorXd& x) { return p.analytic->at(x) + 0.1 * x[0]; };
  const double a = cmfn::rms_error_at_points(f, *p.analytic, pts);
  std::shuffle(pts.begin(), pts.end(), rng);
  const double b = cmfn::rms_error_at_points(f, *p.analytic, pts);
  std::reverse(pts.begin(), pts.end());
  const double c = cmfn::rms_error_at_points(f, *p.analytic, pts);
  CHECK(a == b);
  CHECK(b == c);
  // rms of 0.1 x over uniform draws on [0, 10]: close to 0.1 * 10 / sqrt(3)
  CHECK(a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(0.15));
}

TEST_CASE("error distribution rows and csv") {
  const ProblemSpec p = cmfn::problem_integral();
  const TrialFunction t = cmfn::make_default_trial(p, {1, 5, 5, 1}, 1);
  const std::vector<cmfn::DistributionRow> rows =
      cmfn::error_distribution(t, *p.analytic, p.lo, p.hi, 11);
  REQUIRE(rows.size() == 11);
  CHECK(rows.front().x[0] == 0.0);
  CHECK(rows.back().x[0] == 10.0);
  for (const cmfn::DistributionRow& r : rows) {
    CHECK(r.error == doctest::Approx(r.exact - r.model).epsilon(1e-14));  // signed
    // y = G + w N: bulk column is w N, so model - bulk is the boundary term
    const double g = t.g_term({cmfn::Jet::constant(r.x[0], 0)}).value();
    CHECK(r.model - r.bulk == doctest::Approx(g).epsilon(1e-12).scale(1.0));
  }
  const std::string path = "/tmp/cmfn_test_dist.csv";
  cmfn::write_distribution_csv(path, rows, 1);
  CHECK(count_lines(path) == 12);  // header + rows
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,exact,model,error,bulk,reduced");
  std::remove(path.c_str());
}

TEST_CASE("derivative sweep vanishes when the trial is exact") {
  // force the network to contribute nothing and make G the analytic solution
  const ProblemSpec p = cmfn::problem_integral();
  TrialFunction t = cmfn::make_default_trial(p, {1, 5, 5, 1}, 1);
  t.g_term = *p.analytic;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(t.net.param_count());
  t.net = set_params(std::move(t.net), zero);
  const cmfn::DerivativeSweep sweep = cmfn::derivative_sweep(t, p, 8, 101);
  REQUIRE(sweep.orders.size() == 8);
  for (size_t i = 0; i < sweep.orders.size(); ++i) {
    CHECK(sweep.orders[i] == static_cast<int>(i) + 1);
    CHECK(sweep.rel_l2_error[i] < 1e-12);
  }
  const std::string path = "/tmp/cmfn_test_sweep.csv";
  cmfn::write_sweep_csv(path, sweep);
  CHECK(count_lines(path) == 9);
  std::remove(path.c_str());
}

TEST_CASE("derivative sweep measures a known perturbation") {
  // trial = analytic + c sin(x): relative error at order k is
  // |c| * ||sin^(k)|| / ||exact^(k)||; for the integral problem exact = 1 + sin x,
  // so every derivative order gives |c| / (norm ratio) = c for k >= 1
  const ProblemSpec p = cmfn::problem_integral();
  TrialFunction t = cmfn::make_default_trial(p, {1, 5, 5, 1}, 1);
  const double c = 1e-3;
  t.g_term = SmoothField{1, "perturbed", [c](const std::vector<cmfn::Jet>& x) {
                           return 1.0 + (1.0 + c) * sin(x[0]);
                         }};
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(t.net.param_count());
  t.net = set_params(std::move(t.net), zero);
  const cmfn::DerivativeSweep sweep = cmfn::derivative_sweep(t, p, 4, 201);
  for (double e : sweep.rel_l2_error) CHECK(e == doctest::Approx(c).epsilon(1e-6));
}

TEST_CASE("derivative sweep rejects 2D problems") {
  const ProblemSpec p = cmfn::problem_laplace();
  const TrialFunction t = cmfn::make_default_trial(p, {2, 4, 4, 1}, 1);
  CHECK_THROWS_AS(cmfn::derivative_sweep(t, p, 4), cmfn::UnsupportedOperation);
}

TEST_CASE("ablation variant parsing and validity") {
  using cmfn::AblationVariant;
  CHECK(cmfn::ablation_variant_from_string("g-const") == AblationVariant::GConst);
  CHECK(cmfn::ablation_variant_from_string("w-linear") == AblationVariant::WLinear);
  CHECK(cmfn::ablation_variant_from_string("w-squared") == AblationVariant::WSquared);
  CHECK_THROWS_AS(cmfn::ablation_variant_from_string("w-cubic"), cmfn::ConfigError);
  CHECK(cmfn::to_string(AblationVariant::GConst) == "g-const");

  cmfn::TrainConfig quick;
  quick.optimizer.max_iters = 5;
  // invalid pairings are refused
  CHECK_THROWS_AS(cmfn::ablation_run("laplace", AblationVariant::GConst, {1}, quick),
                  cmfn::ConfigError);
  CHECK_THROWS_AS(cmfn::ablation_run("integral", AblationVariant::WSquared, {1}, quick),
                  cmfn::ConfigError);
  CHECK_THROWS_AS(cmfn::ablation_run("boundary-layer", AblationVariant::GConst, {1}, quick),
                  cmfn::ConfigError);
}

TEST_CASE("ablation run produces per-seed errors and medians") {
  cmfn::TrainConfig cfg;
  cfg.widths = {1, 8, 8, 1};
  cfg.points_1d = 30;
  cfg.optimizer.max_iters = 250;
  const std::vector<uint64_t> seeds = {1, 2, 3};
  const cmfn::AblationResult res =
      cmfn::ablation_run("integral", cmfn::AblationVariant::WLinear, seeds, cfg);
  REQUIRE(res.baseline_errors.size() == 3);
  REQUIRE(res.variant_errors.size() == 3);
  for (double e : res.baseline_errors) CHECK(e > 0.0);
  std::vector<double> sorted = res.baseline_errors;
  std::sort(sorted.begin(), sorted.end());
  CHECK(res.median_baseline == doctest::Approx(sorted[1]));
  CHECK(res.ratio == doctest::Approx(res.median_variant / res.median_baseline));

  const std::string path = "/tmp/cmfn_test_abl.csv";
  cmfn::write_ablation_csv(path, res, seeds, "integral", cmfn::AblationVariant::WLinear);
  CHECK(count_lines(path) >= 4);
  std::remove(path.c_str());
}
