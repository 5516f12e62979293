#ifndef CMFN_TRAINER_HPP
#define CMFN_TRAINER_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cmfn/optimizer.hpp"
#include "cmfn/problems.hpp"

namespace cmfn {

/// Finite training set of collocation points.
struct CollocationSet {
  std::vector<Eigen::VectorXd> points;
  std::string provenance;
};

/// n equally spaced points spanning [a, b], endpoints included.
CollocationSet uniform_points_1d(double a, double b, int n);

/// Vertices of the nx x ny uniform mesh over the box, boundary included.
CollocationSet grid_points_2d(int nx, int ny, const Eigen::VectorXd& lo,
                              const Eigen::VectorXd& hi);

/// Sum of squared residuals over the collocation set (plain sum, no mean).
double loss(const TrialFunction& t, const ProblemSpec& p, const CollocationSet& colloc);

/// Loss and its gradient with respect to the flattened network parameters.
/// One adjoint trace per collocation point; gradients reduce in point order,
/// so the result is deterministic.
std::pair<double, Eigen::VectorXd> loss_grad(const TrialFunction& t, const ProblemSpec& p,
                                             const CollocationSet& colloc);

struct TrainConfig {
  std::string problem = "integral";
  std::vector<int> widths;  // empty: problem default
  uint64_t seed = 0;
  int points_1d = 0;  // 0: problem default
  int grid_nx = 0, grid_ny = 0;
  LbfgsConfig optimizer;
  int retries = 3;
  bool scale_inputs = false;  // affinely map the domain onto [-1, 1] per axis
  double nu = 0.5;            // boundary-layer parameter
  double alpha = 0.1;         // convection-diffusion parameter
};

struct TrainReport {
  double final_loss = 0.0;
  double mean_squared_residual = 0.0;
  int iterations = 0;
  std::vector<double> loss_trajectory;
  uint64_t seed_used = 0;
  int attempts = 1;
  double wall_seconds = 0.0;
  std::string termination;
};

CollocationSet default_collocation(const ProblemSpec& p, const TrainConfig& cfg);

/// End-to-end training: build the default model, minimize the collocation
/// loss, retry with seed+1 on line-search failure. Returns the best-loss
/// attempt. Throws TrainingFailure if every attempt fails the line search.
std::pair<TrialFunction, TrainReport> train(const TrainConfig& cfg);
std::pair<TrialFunction, TrainReport> train(const ProblemSpec& p, const TrialFunction& start,
                                            const CollocationSet& colloc, const TrainConfig& cfg);

}  // namespace cmfn

#endif
