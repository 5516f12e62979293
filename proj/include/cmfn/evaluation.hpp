#ifndef CMFN_EVALUATION_HPP
#define CMFN_EVALUATION_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cmfn/trainer.hpp"

namespace cmfn {

struct ErrorReport {
  double l2_error = 0.0;   // sqrt of the trapezoid-weighted mean squared error
  double max_error = 0.0;
  std::string grid;
  int n_points = 0;
};

/// L2 error of the trial against the closed-form solution over a dense
/// uniform grid (default 1001 points in 1D, 101 per axis in 2D), trapezoid
/// weighted and normalized by the domain measure. The grid is distinct from
/// any training set. Summation order is fixed (grid order).
ErrorReport l2_error(const TrialFunction& t, const SmoothField& analytic,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int grid_n = 0);

/// Same, for any plain evaluator (used to score non-trial fields).
ErrorReport l2_error_fn(const std::function<double(const Eigen::VectorXd&)>& f,
                        const SmoothField& analytic, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi, int grid_n = 0);

/// Root-mean-square error over an explicit point list. Points are sorted
/// lexicographically before accumulation, so the result is invariant under
/// reordering of the input.
double rms_error_at_points(const std::function<double(const Eigen::VectorXd&)>& f,
                           const SmoothField& analytic, std::vector<Eigen::VectorXd> points);

struct DistributionRow {
  Eigen::VectorXd x;
  double exact;
  double model;
  double error;
  double bulk;     // w(x) N(x), 1D only (0 otherwise)
  double reduced;  // N(x), 1D only
};

/// Per-point error table; for 1D problems also the bulk term and reduced
/// solution columns.
std::vector<DistributionRow> error_distribution(const TrialFunction& t,
                                                const SmoothField& analytic,
                                                const Eigen::VectorXd& lo,
                                                const Eigen::VectorXd& hi, int grid_n = 0);

void write_distribution_csv(const std::string& path, const std::vector<DistributionRow>& rows,
                            int dim);

struct DerivativeSweep {
  std::vector<int> orders;
  std::vector<double> rel_l2_error;  // per order, relative L2 vs analytic derivative
};

/// Relative L2 error of d^k(trial)/dx^k against the analytic derivative for
/// k = 1..max_order, via order-K jets on a uniform interior grid (1D only).
DerivativeSweep derivative_sweep(const TrialFunction& t, const ProblemSpec& p, int max_order,
                                 int grid_n = 0);

void write_sweep_csv(const std::string& path, const DerivativeSweep& sweep);

enum class AblationVariant { GConst, WLinear, WSquared };

AblationVariant ablation_variant_from_string(const std::string& s);
std::string to_string(AblationVariant v);

struct AblationResult {
  std::vector<double> baseline_errors;  // per seed L2 error
  std::vector<double> variant_errors;
  double median_baseline = 0.0;
  double median_variant = 0.0;
  double ratio = 0.0;  // median_variant / median_baseline
};

/// Trains the problem's default model and the degraded variant on each seed
/// and reports median L2 errors. Valid pairs: integral with G*=1 or w*=x;
/// boundary-layer with w*=x^2(1-x).
AblationResult ablation_run(const std::string& problem, AblationVariant variant,
                            const std::vector<uint64_t>& seeds, const TrainConfig& base_cfg = {});

void write_ablation_csv(const std::string& path, const AblationResult& result,
                        const std::vector<uint64_t>& seeds, const std::string& problem,
                        AblationVariant variant);

}  // namespace cmfn

#endif
