#pragma once

#include <json.hpp>

#include "treejudge/reward.hpp"
#include "treejudge/search.hpp"

namespace treejudge {

nlohmann::json to_json(const SearchConfig& cfg);
nlohmann::json to_json(const RewardConfig& cfg);

// Overlays the fields present in `overrides` onto `cfg`; absent fields keep
// their current values. Used for the defaults <- file <- flags layering.
void apply_json(SearchConfig& cfg, const nlohmann::json& overrides);
void apply_json(RewardConfig& cfg, const nlohmann::json& overrides);

}  // namespace treejudge
