#include "adrl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adrl {

using nlohmann::json;

namespace {

std::string pick(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

void reject_unknown(const json& obj, const std::string& section, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(pick(section, "") + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + pick(section, key) + "'");
  }
}

template <typename T>
void read(const json& obj, const std::string& section, const std::string& key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(pick(section, key) + ": wrong type");
  }
}

void read_count(const json& obj, const std::string& section, const std::string& key, std::size_t& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(pick(section, key) + ": expected a nonnegative integer");
  }
  out = v.get<std::size_t>();
}

void in_open_unit(double v, const std::string& field) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(field + ": must lie in (0,1)");
}

std::string mode_name(PolicyMode m) { return m == PolicyMode::eval ? "eval" : "train"; }

std::string baseline_name(RewardBaseline b) { return b == RewardBaseline::initial ? "initial" : "previous"; }

json to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["environment"] = {{"processes", c.environment.count()},
                      {"abnormal_probs", c.environment.abnormal_probs},
                      {"flip_prob", c.environment.flip_prob}};
  j["learning"] = {{"return_discount", c.learning.return_discount},
                   {"td_discount", c.learning.td_discount},
                   {"actor_learning_rate", c.learning.actor_learning_rate},
                   {"critic_learning_rate", c.learning.critic_learning_rate},
                   {"learning_rate_decay", c.learning.learning_rate_decay},
                   {"max_episode_len", c.learning.max_episode_len},
                   {"reward_baseline", baseline_name(c.learning.reward_baseline)}};
  j["training"] = {{"max_episodes", c.training.max_episodes},
                   {"validation_interval", c.training.validation_interval},
                   {"validation_hold", c.training.validation_hold},
                   {"validation_set_size", c.training.validation_set_size},
                   {"pi_up", c.training.pi_up}};
  j["testing"] = {{"warmup_steps", c.testing.schedule.warmup_steps},
                  {"max_sampling_time", c.testing.schedule.max_sampling_time},
                  {"episodes_per_cell", c.testing.episodes_per_cell},
                  {"pi_up", c.testing.pi_up},
                  {"pi_low", c.testing.pi_low},
                  {"pi_up_grid", c.testing.pi_up_grid},
                  {"pi_low_grid", c.testing.pi_low_grid},
                  {"compare_pi_low", c.testing.compare_pi_low},
                  {"agent_mode", mode_name(c.testing.agent_mode)}};
  j["chernoff"] = {{"explore_prob", c.chernoff.explore_prob}, {"oracle_kl", c.chernoff.oracle_kl}};
  return j;
}

RunConfig from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, "", {"seed", "output_dir", "environment", "learning", "training", "testing", "chernoff"});
  read(j, "", "seed", c.seed);
  read(j, "", "output_dir", c.output_dir);

  if (j.contains("environment")) {
    const auto& e = j.at("environment");
    reject_unknown(e, "environment", {"processes", "abnormal_probs", "flip_prob"});
    read(e, "environment", "abnormal_probs", c.environment.abnormal_probs);
    read(e, "environment", "flip_prob", c.environment.flip_prob);
    if (e.contains("processes")) {
      std::size_t n = 0;
      read_count(e, "environment", "processes", n);
      if (!e.contains("abnormal_probs")) {
        throw ConfigError("environment.processes: abnormal_probs must be given when processes is set");
      }
      if (n != c.environment.count()) {
        throw ConfigError("environment.abnormal_probs: length " + std::to_string(c.environment.count()) +
                          " does not match processes = " + std::to_string(n));
      }
    }
  }
  if (j.contains("learning")) {
    const auto& l = j.at("learning");
    reject_unknown(l, "learning",
                   {"return_discount", "td_discount", "actor_learning_rate", "critic_learning_rate",
                    "learning_rate_decay", "max_episode_len", "reward_baseline"});
    read(l, "learning", "return_discount", c.learning.return_discount);
    read(l, "learning", "td_discount", c.learning.td_discount);
    read(l, "learning", "actor_learning_rate", c.learning.actor_learning_rate);
    read(l, "learning", "critic_learning_rate", c.learning.critic_learning_rate);
    read(l, "learning", "learning_rate_decay", c.learning.learning_rate_decay);
    read_count(l, "learning", "max_episode_len", c.learning.max_episode_len);
    if (l.contains("reward_baseline")) {
      std::string name;
      read(l, "learning", "reward_baseline", name);
      if (name == "initial") {
        c.learning.reward_baseline = RewardBaseline::initial;
      } else if (name == "previous") {
        c.learning.reward_baseline = RewardBaseline::previous;
      } else {
        throw ConfigError("learning.reward_baseline: expected \"initial\" or \"previous\"");
      }
    }
  }
  if (j.contains("training")) {
    const auto& t = j.at("training");
    reject_unknown(t, "training",
                   {"max_episodes", "validation_interval", "validation_hold", "validation_set_size", "pi_up"});
    read_count(t, "training", "max_episodes", c.training.max_episodes);
    read_count(t, "training", "validation_interval", c.training.validation_interval);
    read_count(t, "training", "validation_hold", c.training.validation_hold);
    read_count(t, "training", "validation_set_size", c.training.validation_set_size);
    read(t, "training", "pi_up", c.training.pi_up);
  }
  if (j.contains("testing")) {
    const auto& t = j.at("testing");
    reject_unknown(t, "testing",
                   {"warmup_steps", "max_sampling_time", "episodes_per_cell", "pi_up", "pi_low", "pi_up_grid",
                    "pi_low_grid", "compare_pi_low", "agent_mode"});
    read_count(t, "testing", "warmup_steps", c.testing.schedule.warmup_steps);
    read_count(t, "testing", "max_sampling_time", c.testing.schedule.max_sampling_time);
    read_count(t, "testing", "episodes_per_cell", c.testing.episodes_per_cell);
    read(t, "testing", "pi_up", c.testing.pi_up);
    read(t, "testing", "pi_low", c.testing.pi_low);
    read(t, "testing", "pi_up_grid", c.testing.pi_up_grid);
    read(t, "testing", "pi_low_grid", c.testing.pi_low_grid);
    read(t, "testing", "compare_pi_low", c.testing.compare_pi_low);
    if (t.contains("agent_mode")) {
      std::string mode;
      read(t, "testing", "agent_mode", mode);
      if (mode == "eval") {
        c.testing.agent_mode = PolicyMode::eval;
      } else if (mode == "train") {
        c.testing.agent_mode = PolicyMode::train;
      } else {
        throw ConfigError("testing.agent_mode: expected \"eval\" or \"train\"");
      }
    }
  }
  if (j.contains("chernoff")) {
    const auto& ch = j.at("chernoff");
    reject_unknown(ch, "chernoff", {"explore_prob", "oracle_kl"});
    read(ch, "chernoff", "explore_prob", c.chernoff.explore_prob);
    read(ch, "chernoff", "oracle_kl", c.chernoff.oracle_kl);
  }
  c.validate();
  return c;
}

}  // namespace

void RunConfig::validate() const {
  try {
    environment.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("environment: ") + e.what());
  }
  try {
    learning.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const std::size_t hypotheses = std::size_t{1} << environment.count();
  if (training.max_episodes == 0) throw ConfigError("training.max_episodes: must be positive");
  if (!(training.pi_up > 0.5 && training.pi_up < 1.0)) throw ConfigError("training.pi_up: must lie in (0.5,1)");
  if (training.validation_interval > 0) {
    if (training.validation_hold == 0) throw ConfigError("training.validation_hold: must be positive");
    if (training.validation_set_size == 0 || training.validation_set_size > hypotheses) {
      throw ConfigError("training.validation_set_size: must lie in [1, " + std::to_string(hypotheses) + "]");
    }
  }

  if (testing.schedule.max_sampling_time == 0) throw ConfigError("testing.max_sampling_time: must be positive");
  if (testing.episodes_per_cell == 0) throw ConfigError("testing.episodes_per_cell: must be positive");
  if (!(testing.pi_up >= 0.5 && testing.pi_up < 1.0)) throw ConfigError("testing.pi_up: must lie in [0.5,1)");
  in_open_unit(testing.pi_low, "testing.pi_low");
  if (!(testing.pi_low < testing.pi_up)) throw ConfigError("testing.pi_low: must be below testing.pi_up");
  if (testing.pi_up_grid.empty()) throw ConfigError("testing.pi_up_grid: must not be empty");
  if (testing.pi_low_grid.empty()) throw ConfigError("testing.pi_low_grid: must not be empty");
  for (double v : testing.pi_up_grid) {
    if (!(v >= 0.5 && v < 1.0)) throw ConfigError("testing.pi_up_grid: values must lie in [0.5,1)");
  }
  for (double v : testing.pi_low_grid) in_open_unit(v, "testing.pi_low_grid");
  in_open_unit(testing.compare_pi_low, "testing.compare_pi_low");

  try {
    chernoff.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return from_json(j);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string default_config_json() { return config_to_json(RunConfig{}); }

}  // namespace adrl
