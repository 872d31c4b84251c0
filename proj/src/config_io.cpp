#include "treejudge/config_io.hpp"

namespace treejudge {

using nlohmann::json;

json to_json(const SearchConfig& cfg) {
  return json{{"max_depth", cfg.max_depth}, {"rollouts", cfg.rollouts},
              {"alpha", cfg.alpha},         {"w_u", cfg.w_u},
              {"w_l", cfg.w_l},             {"rng_seed", cfg.rng_seed}};
}

json to_json(const RewardConfig& cfg) {
  return json{{"beta", cfg.beta},
              {"gamma", cfg.gamma},
              {"delta", cfg.delta},
              {"epsilon", cfg.epsilon},
              {"mode", std::string(to_string(cfg.mode))},
              {"consistency_samples", cfg.consistency_samples}};
}

void apply_json(SearchConfig& cfg, const json& overrides) {
  cfg.max_depth = overrides.value("max_depth", cfg.max_depth);
  cfg.rollouts = overrides.value("rollouts", cfg.rollouts);
  cfg.alpha = overrides.value("alpha", cfg.alpha);
  cfg.w_u = overrides.value("w_u", cfg.w_u);
  cfg.w_l = overrides.value("w_l", cfg.w_l);
  cfg.rng_seed = overrides.value("rng_seed", cfg.rng_seed);
}

void apply_json(RewardConfig& cfg, const json& overrides) {
  cfg.beta = overrides.value("beta", cfg.beta);
  cfg.gamma = overrides.value("gamma", cfg.gamma);
  cfg.delta = overrides.value("delta", cfg.delta);
  cfg.epsilon = overrides.value("epsilon", cfg.epsilon);
  if (overrides.contains("mode")) {
    auto mode = reward_mode_from_string(overrides["mode"].get<std::string>());
    if (!mode) {
      throw std::runtime_error("unknown reward mode '" +
                               overrides["mode"].get<std::string>() + "'");
    }
    cfg.mode = *mode;
  }
  cfg.consistency_samples =
      overrides.value("consistency_samples", cfg.consistency_samples);
}

}  // namespace treejudge
