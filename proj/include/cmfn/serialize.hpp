#ifndef CMFN_SERIALIZE_HPP
#define CMFN_SERIALIZE_HPP

#include <string>

#include "cmfn/evaluation.hpp"
#include "cmfn/network.hpp"
#include "cmfn/trainer.hpp"

namespace cmfn {

/// Parameter snapshot: {"widths": [...], "activation": "...", "seed": N,
/// "params": [...]} plus "input_scale"/"input_shift" when an input map is set.
std::string params_to_json(const Mfn& net);
Mfn params_from_json(const std::string& json_text);

void save_params(const std::string& path, const Mfn& net);
Mfn load_params(const std::string& path);

std::string train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& json_text);

/// Full run report: config echo, training summary, error metrics, manifest.
std::string run_report_to_json(const TrainConfig& cfg, const TrainReport& train,
                               const ErrorReport& error,
                               const std::vector<std::string>& files);

}  // namespace cmfn

#endif
