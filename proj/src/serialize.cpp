#include "cmfn/serialize.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cmfn {

using nlohmann::json;

std::string params_to_json(const Mfn& net) {
  json j;
  j["widths"] = net.widths;
  j["activation"] = to_string(net.activation);
  j["seed"] = net.seed;
  const Eigen::VectorXd v = get_params(net);
  j["params"] = std::vector<double>(v.data(), v.data() + v.size());
  if (net.in_scale.size() > 0) {
    j["input_scale"] = std::vector<double>(net.in_scale.data(),
                                           net.in_scale.data() + net.in_scale.size());
    j["input_shift"] = std::vector<double>(net.in_shift.data(),
                                           net.in_shift.data() + net.in_shift.size());
  }
  return j.dump(2);
}

Mfn params_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  Mfn net = mfn_init(j.at("widths").get<std::vector<int>>(), j.at("seed").get<uint64_t>(),
                     activation_from_string(j.at("activation").get<std::string>()));
  const std::vector<double> params = j.at("params").get<std::vector<double>>();
  net = set_params(std::move(net),
                   Eigen::Map<const Eigen::VectorXd>(params.data(), params.size()));
  if (j.contains("input_scale")) {
    const auto sc = j["input_scale"].get<std::vector<double>>();
    const auto sh = j["input_shift"].get<std::vector<double>>();
    net.in_scale = Eigen::Map<const Eigen::VectorXd>(sc.data(), sc.size());
    net.in_shift = Eigen::Map<const Eigen::VectorXd>(sh.data(), sh.size());
  }
  return net;
}

void save_params(const std::string& path, const Mfn& net) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << params_to_json(net) << "\n";
}

Mfn load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return params_from_json(ss.str());
}

namespace {

json config_json(const TrainConfig& cfg) {
  json j;
  j["problem"] = cfg.problem;
  j["widths"] = cfg.widths;
  j["seed"] = cfg.seed;
  j["points_1d"] = cfg.points_1d;
  j["grid_nx"] = cfg.grid_nx;
  j["grid_ny"] = cfg.grid_ny;
  j["retries"] = cfg.retries;
  j["scale_inputs"] = cfg.scale_inputs;
  j["nu"] = cfg.nu;
  j["alpha"] = cfg.alpha;
  j["optimizer"] = {{"memory", cfg.optimizer.memory},
                    {"max_iters", cfg.optimizer.max_iters},
                    {"grad_tol", cfg.optimizer.grad_tol},
                    {"loss_tol", cfg.optimizer.loss_tol},
                    {"wolfe_c1", cfg.optimizer.wolfe_c1},
                    {"wolfe_c2", cfg.optimizer.wolfe_c2},
                    {"max_line_search_steps", cfg.optimizer.max_line_search_steps}};
  return j;
}

}  // namespace

std::string train_config_to_json(const TrainConfig& cfg) { return config_json(cfg).dump(2); }

TrainConfig train_config_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  TrainConfig cfg;
  cfg.problem = j.value("problem", cfg.problem);
  cfg.widths = j.value("widths", cfg.widths);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.points_1d = j.value("points_1d", cfg.points_1d);
  cfg.grid_nx = j.value("grid_nx", cfg.grid_nx);
  cfg.grid_ny = j.value("grid_ny", cfg.grid_ny);
  cfg.retries = j.value("retries", cfg.retries);
  cfg.scale_inputs = j.value("scale_inputs", cfg.scale_inputs);
  cfg.nu = j.value("nu", cfg.nu);
  cfg.alpha = j.value("alpha", cfg.alpha);
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    cfg.optimizer.memory = o.value("memory", cfg.optimizer.memory);
    cfg.optimizer.max_iters = o.value("max_iters", cfg.optimizer.max_iters);
    cfg.optimizer.grad_tol = o.value("grad_tol", cfg.optimizer.grad_tol);
    cfg.optimizer.loss_tol = o.value("loss_tol", cfg.optimizer.loss_tol);
    cfg.optimizer.wolfe_c1 = o.value("wolfe_c1", cfg.optimizer.wolfe_c1);
    cfg.optimizer.wolfe_c2 = o.value("wolfe_c2", cfg.optimizer.wolfe_c2);
    cfg.optimizer.max_line_search_steps =
        o.value("max_line_search_steps", cfg.optimizer.max_line_search_steps);
  }
  return cfg;
}

std::string run_report_to_json(const TrainConfig& cfg, const TrainReport& train,
                               const ErrorReport& error,
                               const std::vector<std::string>& files) {
  json j;
  j["tool"] = "cmfn";
  j["version"] = "1.0.0";
  j["config"] = config_json(cfg);
  j["train"] = {{"final_loss", train.final_loss},
                {"mean_squared_residual", train.mean_squared_residual},
                {"iterations", train.iterations},
                {"loss_trajectory", train.loss_trajectory},
                {"seed_used", train.seed_used},
                {"attempts", train.attempts},
                {"wall_seconds", train.wall_seconds},
                {"termination", train.termination}};
  j["error"] = {{"l2_error", error.l2_error},
                {"max_error", error.max_error},
                {"grid", error.grid},
                {"n_points", error.n_points}};
  j["files"] = files;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["timestamp"] = buf;
  return j.dump(2);
}

}  // namespace cmfn
