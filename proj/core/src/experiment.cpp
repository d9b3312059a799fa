#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "hba/eval.hpp"
#include "hba/json_util.hpp"
#include "hba/log.hpp"

namespace hba {

namespace {

using nlohmann::json;

bool matrix_domain(const std::string& domain) { return domain == "PD" || domain == "RPS"; }

// Schema checks that report the line of the offending value.
class Checker {
 public:
  Checker(std::string source, std::map<std::string, std::size_t> lines)
      : source_(std::move(source)), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    std::size_t line = 0;
    for (std::string p = pointer;; p = p.substr(0, p.rfind('/'))) {
      auto it = lines_.find(p);
      if (it != lines_.end()) {
        line = it->second;
        break;
      }
      if (p.empty()) break;
    }
    const std::string where = pointer.empty() ? "(root)" : pointer;
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + where + ": " + message, line);
  }

  void keys(const json& obj, const std::string& pointer, std::set<std::string> allowed) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.contains(key)) fail(pointer + "/" + key, "unknown key '" + key + "'");
    }
  }

  std::string string(const json& v, const std::string& pointer) const {
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  double number(const json& v, const std::string& pointer, double lo,
                double hi = INFINITY) const {
    if (!v.is_number()) fail(pointer, "expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) {
      fail(pointer, "must lie in [" + format_double(lo) + ", " + format_double(hi) + "]");
    }
    return x;
  }

  std::int64_t integer(const json& v, const std::string& pointer, std::int64_t lo,
                       std::int64_t hi = INT64_MAX) const {
    if (!v.is_number_integer()) fail(pointer, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) {
      fail(pointer, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
  }

  std::vector<std::string> strings(const json& v, const std::string& pointer, bool nonempty) const {
    if (!v.is_array()) fail(pointer, "expected an array of strings");
    if (nonempty && v.empty()) fail(pointer, "must not be empty");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      out.push_back(string(v[k], pointer + "/" + std::to_string(k)));
    }
    return out;
  }

 private:
  std::string source_;
  std::map<std::string, std::size_t> lines_;
};

bool valid_foraging_hypothesis(const std::string& name) {
  if (name.size() == 2 && name[0] == 'c' && name[1] >= '1' && name[1] <= '4') return true;
  try {
    heuristic_from_name(name);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

bool valid_foraging_program(const std::string& name) {
  return name == "JAL" || name == "CJAL" || (name[0] == 'H' && valid_foraging_hypothesis(name));
}

ForagingTypePtr foraging_hypothesis(const std::string& name) {
  if (name.size() == 2 && name[0] == 'c') return make_ctype(name[1] - '0');
  return heuristic_from_name(name);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source) {
  const json root = parse_json_text(text, source);
  const Checker check(source, json_value_lines(text));
  check.keys(root, "",
             {"name", "domain", "grid", "rounds", "agents", "hypotheses", "types", "distribution",
              "episodes", "t_max", "r1", "r2", "seed", "workers", "rl", "tr_weight", "window",
              "lookahead"});

  ExperimentConfig c;
  if (root.contains("name")) c.name = check.string(root["name"], "/name");
  if (!root.contains("domain")) check.fail("", "missing required key 'domain'");
  c.domain = check.string(root["domain"], "/domain");
  if (c.domain != "foraging" && !matrix_domain(c.domain)) {
    check.fail("/domain", "unknown domain '" + c.domain + "' (foraging, PD or RPS)");
  }
  const bool matrix = matrix_domain(c.domain);

  if (root.contains("grid")) {
    const auto& g = root["grid"];
    check.keys(g, "/grid", {"width", "height", "players", "foods", "max_level", "max_attempts"});
    auto field = [&](const char* key, int& out, int lo) {
      if (g.contains(key)) out = static_cast<int>(check.integer(g[key], std::string("/grid/") + key, lo, 1000));
    };
    field("width", c.grid.width, 3);
    field("height", c.grid.height, 3);
    field("players", c.grid.players, 1);
    field("foods", c.grid.foods, 1);
    field("max_level", c.grid.max_level, 0);
    field("max_attempts", c.grid.max_attempts, 1);
  }
  if (root.contains("rounds")) c.rounds = static_cast<int>(check.integer(root["rounds"], "/rounds", 1, 100000));

  if (!root.contains("agents")) check.fail("", "missing required key 'agents'");
  c.agents = check.strings(root["agents"], "/agents", true);
  const auto labels = matrix ? std::vector<std::string>{"HBA", "JAL", "CJAL"} : foraging_agent_labels();
  for (std::size_t k = 0; k < c.agents.size(); ++k) {
    if (std::find(labels.begin(), labels.end(), c.agents[k]) == labels.end()) {
      check.fail("/agents/" + std::to_string(k), "unknown agent '" + c.agents[k] + "'");
    }
    for (std::size_t m = 0; m < k; ++m) {
      if (c.agents[m] == c.agents[k]) check.fail("/agents/" + std::to_string(k), "duplicate agent");
    }
  }

  if (matrix) {
    c.hypotheses = matrix_type_names(MatrixGame::by_name(c.domain));
    c.types = c.hypotheses;
  }
  if (root.contains("hypotheses")) {
    if (matrix) check.fail("/hypotheses", "matrix games use the built-in type set");
    c.hypotheses = check.strings(root["hypotheses"], "/hypotheses", true);
    for (std::size_t k = 0; k < c.hypotheses.size(); ++k) {
      if (!valid_foraging_hypothesis(c.hypotheses[k])) {
        check.fail("/hypotheses/" + std::to_string(k), "unknown type '" + c.hypotheses[k] + "'");
      }
    }
  }
  if (root.contains("types")) {
    c.types = check.strings(root["types"], "/types", true);
    for (std::size_t k = 0; k < c.types.size(); ++k) {
      bool ok = false;
      if (matrix) {
        try {
          make_matrix_type(MatrixGame::by_name(c.domain), c.types[k]);
          ok = true;
        } catch (const ConfigError&) {
        }
      } else {
        ok = !c.types[k].empty() && valid_foraging_program(c.types[k]);
      }
      if (!ok) check.fail("/types/" + std::to_string(k), "unknown type '" + c.types[k] + "'");
    }
  }
  if (std::find(c.agents.begin(), c.agents.end(), "Cor") != c.agents.end()) {
    for (std::size_t k = 0; k < c.types.size(); ++k) {
      if (!stateless_foraging_type(c.types[k])) {
        check.fail("/types/" + std::to_string(k),
                   "agent 'Cor' needs stateless types, '" + c.types[k] + "' learns");
      }
    }
  }

  if (root.contains("distribution")) {
    const auto& d = root["distribution"];
    check.keys(d, "/distribution", {"kind", "min_interval", "max_interval", "switch_probability"});
    if (d.contains("kind")) {
      c.distribution.kind = check.string(d["kind"], "/distribution/kind");
      if (c.distribution.kind != "static" && c.distribution.kind != "switching") {
        check.fail("/distribution/kind", "expected 'static' or 'switching'");
      }
    }
    if (d.contains("min_interval")) {
      c.distribution.min_interval = static_cast<int>(check.integer(d["min_interval"], "/distribution/min_interval", 1, 1000000));
    }
    if (d.contains("max_interval")) {
      c.distribution.max_interval = static_cast<int>(check.integer(d["max_interval"], "/distribution/max_interval", 1, 1000000));
    }
    if (c.distribution.max_interval < c.distribution.min_interval) {
      check.fail("/distribution/max_interval", "must not be below min_interval");
    }
    if (d.contains("switch_probability")) {
      c.distribution.switch_probability =
          check.number(d["switch_probability"], "/distribution/switch_probability", 0.0, 1.0);
    }
  }

  if (root.contains("episodes")) c.estimator.episodes = static_cast<std::size_t>(check.integer(root["episodes"], "/episodes", 1));
  if (root.contains("t_max")) c.t_max = static_cast<std::size_t>(check.integer(root["t_max"], "/t_max", 1));
  if (root.contains("r1")) c.estimator.r1 = check.number(root["r1"], "/r1", 1.0);
  if (root.contains("r2")) c.estimator.r2 = check.number(root["r2"], "/r2", 1.0);
  if (root.contains("seed")) c.estimator.seed = static_cast<std::uint64_t>(check.integer(root["seed"], "/seed", 0));
  if (root.contains("workers")) c.estimator.workers = static_cast<unsigned>(check.integer(root["workers"], "/workers", 1, 1024));
  if (root.contains("window")) c.window = static_cast<std::size_t>(check.integer(root["window"], "/window", 1));
  if (root.contains("lookahead")) c.lookahead = static_cast<int>(check.integer(root["lookahead"], "/lookahead", 0, 64));

  if (root.contains("rl")) {
    const auto& r = root["rl"];
    check.keys(r, "/rl", {"beta", "gamma", "lambda", "e_min", "epsilon_real", "epsilon_simulated",
                          "expansions", "depth"});
    auto unit = [&](const char* key, double& out) {
      if (r.contains(key)) out = check.number(r[key], std::string("/rl/") + key, 0.0, 1.0);
    };
    unit("beta", c.params.beta);
    unit("gamma", c.params.gamma);
    unit("lambda", c.params.lambda);
    unit("e_min", c.params.e_min);
    unit("epsilon_real", c.params.epsilon_real);
    unit("epsilon_simulated", c.params.epsilon_simulated);
    if (r.contains("expansions")) c.params.expansions = static_cast<int>(check.integer(r["expansions"], "/rl/expansions", 0, 10000));
    if (r.contains("depth")) c.params.depth = static_cast<int>(check.integer(r["depth"], "/rl/depth", 0, 10000));
  }
  if (root.contains("tr_weight")) {
    const auto& w = root["tr_weight"];
    check.keys(w, "/tr_weight", {"a", "b", "c"});
    double a = 10.0, b = 0.01, cc = 3.0;
    if (w.contains("a")) a = check.number(w["a"], "/tr_weight/a", 0.0);
    if (w.contains("b")) b = check.number(w["b"], "/tr_weight/b", 0.0);
    if (w.contains("c")) cc = check.number(w["c"], "/tr_weight/c", 0.0);
    c.tr_weight = TimeWeight::general(a, b, cc);
  }

  if (!matrix) {
    // Catch impossible grids before any episode runs.
    if (c.grid.players < 2) check.fail("/grid/players", "need the ad hoc agent and at least one other player");
    std::size_t count = 1;
    for (int j = 1; j < c.grid.players; ++j) {
      count *= c.types.size();
      if (c.distribution.kind == "static" && count > 100000) {
        check.fail("/types", "too many fixed type assignments");
      }
    }
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path), path);
}

json to_json(const ExperimentConfig& c) {
  json j{{"name", c.name},
         {"domain", c.domain},
         {"agents", c.agents},
         {"types", c.types},
         {"distribution",
          {{"kind", c.distribution.kind},
           {"min_interval", c.distribution.min_interval},
           {"max_interval", c.distribution.max_interval},
           {"switch_probability", c.distribution.switch_probability}}},
         {"episodes", c.estimator.episodes},
         {"t_max", c.t_max},
         {"r1", c.estimator.r1},
         {"r2", c.estimator.r2},
         {"seed", c.estimator.seed},
         {"rl",
          {{"beta", c.params.beta},
           {"gamma", c.params.gamma},
           {"lambda", c.params.lambda},
           {"e_min", c.params.e_min},
           {"epsilon_real", c.params.epsilon_real},
           {"epsilon_simulated", c.params.epsilon_simulated},
           {"expansions", c.params.expansions},
           {"depth", c.params.depth}}}};
  if (matrix_domain(c.domain)) {
    j["rounds"] = c.rounds;
    j["lookahead"] = c.lookahead;
  } else {
    j["grid"] = {{"width", c.grid.width},   {"height", c.grid.height},
                 {"players", c.grid.players}, {"foods", c.grid.foods},
                 {"max_level", c.grid.max_level}, {"max_attempts", c.grid.max_attempts}};
    j["hypotheses"] = c.hypotheses;
    j["tr_weight"] = {{"a", c.tr_weight.a()}, {"b", c.tr_weight.b()}, {"c", c.tr_weight.c()}};
    j["window"] = c.window;
  }
  return j;
}

std::vector<std::unique_ptr<TypeDistribution>> make_distributions(const ExperimentConfig& c) {
  const int n = matrix_domain(c.domain) ? 2 : c.grid.players;
  const int k = static_cast<int>(c.types.size());
  std::vector<std::unique_ptr<TypeDistribution>> out;
  if (c.distribution.kind == "switching") {
    std::vector<SwitchingTypes::PlayerSchedule> schedules;
    for (int j = 1; j < n; ++j) {
      schedules.push_back({j, k, c.distribution.min_interval, c.distribution.max_interval,
                           c.distribution.switch_probability});
    }
    out.push_back(std::make_unique<SwitchingTypes>(n, std::move(schedules), "switching"));
    return out;
  }
  // Every assignment of catalogue types to players 1..n-1, player 1 slowest.
  JointType joint(static_cast<std::size_t>(n), 0);
  while (true) {
    std::string id = "static:";
    for (int j = 1; j < n; ++j) id += (j > 1 ? "+" : "") + c.types[static_cast<std::size_t>(joint[j])];
    out.push_back(std::make_unique<FixedTypes>(joint, id));
    int j = n - 1;
    while (j >= 1 && ++joint[j] == k) joint[j--] = 0;
    if (j < 1) break;
  }
  return out;
}

namespace {

EpisodeOutcome outcome_of(bool terminated, double payoff_sum, std::size_t length) {
  return {terminated, payoff_sum, length};
}

EpisodeOutcome foraging_episode(const ExperimentConfig& c, const std::string& agent,
                                TypeDistribution& delta, std::uint64_t seed) {
  Rng scenario(derive_seed(seed, Stream::kScenario));
  const ForagingGame game(generate_initial_state(scenario, c.grid));
  const int n = game.num_players();

  ForagingAgentOptions options;
  options.params = c.params;
  options.tr_weight = c.tr_weight;
  options.window = c.window;
  for (const auto& name : c.hypotheses) options.hypotheses.push_back(foraging_hypothesis(name));
  if (agent == "Cor") {
    options.truth.resize(static_cast<std::size_t>(n));
    for (int j = 1; j < n; ++j) {
      for (const auto& name : c.types) options.truth[j].push_back(heuristic_from_name(name));
    }
  }

  std::vector<std::unique_ptr<ForagingController>> owned;
  owned.push_back(make_foraging_agent(agent, game, 0, options));
  for (int j = 1; j < n; ++j) {
    std::vector<std::unique_ptr<ForagingController>> programs;
    for (const auto& name : c.types) programs.push_back(make_foraging_program(name, game, j, c.params));
    owned.push_back(std::make_unique<TypedPlayer<ForagingState>>(std::move(programs)));
  }
  std::vector<ForagingController*> controllers;
  for (auto& p : owned) controllers.push_back(p.get());
  const auto path = run_episode<ForagingState>(game, delta, controllers, c.t_max, seed);
  return outcome_of(path.terminating, path.payoff_sum(0), path.length());
}

EpisodeOutcome matrix_episode(const ExperimentConfig& c, const std::string& agent,
                              TypeDistribution& delta, std::uint64_t seed) {
  const MatrixGame game = MatrixGame::by_name(c.domain, c.rounds);
  auto me = make_matrix_agent(agent, game, 0, c.lookahead);
  std::vector<std::unique_ptr<Controller<MatrixState>>> programs;
  for (const auto& name : c.types) {
    programs.push_back(std::make_unique<BehaviorController<MatrixState>>(make_matrix_type(game, name)));
  }
  TypedPlayer<MatrixState> other(std::move(programs));
  std::vector<Controller<MatrixState>*> controllers{me.get(), &other};
  const auto path = run_episode<MatrixState>(game, delta, controllers,
                                             static_cast<std::size_t>(c.rounds), seed);
  return outcome_of(path.terminating, path.payoff_sum(0), path.length());
}

}  // namespace

EpisodeOutcome run_experiment_episode(const ExperimentConfig& config, const std::string& agent,
                                      const TypeDistribution& delta, std::uint64_t seed) {
  auto local = delta.clone();
  if (matrix_domain(config.domain)) return matrix_episode(config, agent, *local, seed);
  return foraging_episode(config, agent, *local, seed);
}

Estimate run_experiment(const ExperimentConfig& config, const std::string& agent) {
  const auto deltas = make_distributions(config);
  std::vector<std::string> ids;
  for (const auto& d : deltas) ids.push_back(d->id());
  log::info(config.name, ": ", agent, " over ", config.estimator.episodes, " episodes");
  return estimate(config.estimator, ids, [&](std::size_t delta, std::uint64_t seed) {
    return run_experiment_episode(config, agent, *deltas[delta], seed);
  });
}

std::vector<AgentResult> run_experiments(const ExperimentConfig& config) {
  std::vector<AgentResult> results;
  for (const auto& agent : config.agents) results.push_back({agent, run_experiment(config, agent)});
  return results;
}

}  // namespace hba
