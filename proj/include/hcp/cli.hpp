#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcp/experiment.hpp"

namespace hcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitMethodFailed = 3;

// Applies the keys of a JSON config object on top of `base`. Unknown keys and
// out-of-range values throw ConfigError.
ExperimentConfig apply_config_json(const nlohmann::json& j, ExperimentConfig base);
nlohmann::json config_to_json(const ExperimentConfig& config);

// "a1".."b3", "1".."6" or "custom:PATH".
std::shared_ptr<const Hierarchy> resolve_hierarchy(const std::string& id);

// Errors are reported on `err` as: error: kind=<Kind> message="<text>"
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcp::cli
