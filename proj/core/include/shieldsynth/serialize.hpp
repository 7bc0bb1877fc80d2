#pragma once

#include <string>

#include <json.hpp>

#include "shieldsynth/lqr.hpp"
#include "shieldsynth/search.hpp"
#include "shieldsynth/system.hpp"

namespace shieldsynth {

using json = nlohmann::json;

json to_json(const IntervalBox& box);
IntervalBox box_from_json(const json& j);

json to_json(const Eigen::MatrixXd& m);  // row-major nested arrays
Eigen::MatrixXd matrix_from_json(const json& j);

json to_json(const SystemSpec& spec);
SystemSpec spec_from_json(const json& j);

json to_json(const ControllerFamily& family);
ControllerFamily family_from_json(const json& j);

json to_json(const Selector& phi);
Selector selector_from_json(const json& j);

json to_json(const SearchResult& result);

/// Verified artifact: spec + family + selector, reloadable by the shield.
json verified_artifact_json(const SystemSpec& spec, const ControllerFamily& family,
                            const SearchResult& result, std::uint64_t seed);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);  // atomic rename

}  // namespace shieldsynth
