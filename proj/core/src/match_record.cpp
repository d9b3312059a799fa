#include "hba/match_record.hpp"

#include <algorithm>
#include <cmath>

#include "hba/json_util.hpp"

namespace hba {

using nlohmann::json;

json to_json(const MatchRecord& r) {
  json rounds = json::array();
  for (const auto& x : r.history) {
    json posterior = json::object();
    for (const auto& [name, p] : x.posterior) posterior[name] = p;
    json row{{"round", x.round},
             {"human", x.human},
             {"agent", x.agent},
             {"human_payoff", x.human_payoff},
             {"agent_payoff", x.agent_payoff},
             {"human_total", x.human_total},
             {"agent_total", x.agent_total},
             {"posterior", posterior}};
    if (!x.time.empty()) row["time"] = x.time;
    rounds.push_back(std::move(row));
  }
  return {{"schema", "hba.match/1"},
          {"session", r.session},
          {"match_index", r.match_index},
          {"game", r.game},
          {"rounds", r.rounds},
          {"seed", r.seed},
          {"opponent", r.opponent},
          {"started", r.started},
          {"history", rounds}};
}

namespace {

template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

MatchRecord match_record_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("match record: expected an object");
  MatchRecord r;
  r.session = j.value("session", "");
  r.match_index = j.value("match_index", 0);
  r.game = field<std::string>(j, "game", "match record");
  r.rounds = field<int>(j, "rounds", "match record");
  r.seed = field<std::uint64_t>(j, "seed", "match record");
  r.opponent = field<std::string>(j, "opponent", "match record");
  r.started = j.value("started", "");
  const auto& rounds = j.contains("history") ? j.at("history") : json::array();
  if (!rounds.is_array()) throw ConfigError("match record: 'history' must be an array");
  for (std::size_t k = 0; k < rounds.size(); ++k) {
    const auto& x = rounds[k];
    const std::string where = "match record round " + std::to_string(k + 1);
    RoundRecord row;
    row.round = field<int>(x, "round", where);
    row.human = field<int>(x, "human", where);
    row.agent = field<int>(x, "agent", where);
    row.human_payoff = field<double>(x, "human_payoff", where);
    row.agent_payoff = field<double>(x, "agent_payoff", where);
    row.human_total = field<double>(x, "human_total", where);
    row.agent_total = field<double>(x, "agent_total", where);
    if (x.contains("posterior")) {
      if (!x["posterior"].is_object()) throw ConfigError(where + ": 'posterior' must be an object");
      for (const auto& [name, p] : x["posterior"].items()) {
        if (!p.is_number()) throw ConfigError(where + ": posterior entries must be numbers");
        row.posterior.emplace_back(name, p.get<double>());
      }
    }
    row.time = x.value("time", "");
    r.history.push_back(std::move(row));
  }
  return r;
}

MatchRecord parse_match_record(const std::string& text, const std::string& source) {
  return match_record_from_json(parse_json_text(text, source));
}

// ---- LiveMatch ------------------------------------------------------------------

LiveMatch::LiveMatch(const std::string& game, std::string opponent, std::uint64_t seed, int rounds)
    : game_(MatrixGame::by_name(game, rounds)),
      history_(game_.initial_state()),
      shadow_(kHumanPlayer, default_types(game_), match_posterior_config()) {
  agent_ = make_matrix_agent(opponent, game_, kAgentPlayer);
  record_.game = game_.id();
  record_.rounds = rounds;
  record_.seed = seed;
  record_.opponent = std::move(opponent);
  commit();
}

void LiveMatch::commit() {
  if (finished()) return;
  Rng rng(derive_seed(record_.seed, static_cast<std::uint64_t>(history_.time())));
  const Distribution d = agent_->policy(history_.view(), kAgentPlayer, 0, rng);
  committed_ = static_cast<Action>(rng.categorical(d));
}

void LiveMatch::set_origin(std::string session, int match_index, std::string started) {
  record_.session = std::move(session);
  record_.match_index = match_index;
  record_.started = std::move(started);
}

bool LiveMatch::finished() const { return game_.is_terminal(history_.current()); }

const RoundRecord& LiveMatch::play(Action human, std::string time) {
  if (finished()) throw MatchOver("match is over after " + std::to_string(record_.rounds) + " rounds");
  if (human < 0 || human >= game_.num_actions(kHumanPlayer)) {
    throw ConfigError("action " + std::to_string(human) + " is not valid in " + game_.id());
  }
  const Action agent = committed_;
  const auto u = game_.payoff(human, agent);
  history_.push({human, agent}, MatrixState{history_.current().round + 1});
  const auto view = history_.view();
  const std::vector<double> payoffs{u[0], u[1]};
  agent_->observe(view, kAgentPlayer, payoffs);
  shadow_.update(view);

  RoundRecord row;
  row.round = static_cast<int>(history_.time());
  row.human = human;
  row.agent = agent;
  row.human_payoff = u[0];
  row.agent_payoff = u[1];
  row.human_total = (record_.history.empty() ? 0.0 : record_.history.back().human_total) + u[0];
  row.agent_total = (record_.history.empty() ? 0.0 : record_.history.back().agent_total) + u[1];
  row.posterior = shadow_.posterior().snapshot();
  row.time = std::move(time);
  const auto probs = shadow_.posterior().probabilities();
  trace_.emplace_back(probs.begin(), probs.end());
  record_.history.push_back(std::move(row));
  commit();
  return record_.history.back();
}

// ---- replay -----------------------------------------------------------------------

ReplayCheck verify_match_record(const MatchRecord& record) {
  ReplayCheck check;
  LiveMatch match(record.game, record.opponent, record.seed, record.rounds);
  auto fail = [&](std::size_t k, const std::string& what) {
    check.ok = false;
    check.mismatch = "round " + std::to_string(k + 1) + ": " + what;
    return check;
  };
  for (std::size_t k = 0; k < record.history.size(); ++k) {
    const auto& want = record.history[k];
    if (match.finished()) return fail(k, "record is longer than the match");
    if (want.round != static_cast<int>(k + 1)) return fail(k, "rounds out of order");
    if (match.committed_action() != want.agent) {
      return fail(k, "agent played " + match.game().action_label(kAgentPlayer, want.agent) +
                         ", replay gives " +
                         match.game().action_label(kAgentPlayer, match.committed_action()));
    }
    const auto& got = match.play(want.human);
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); };
    if (!near(got.human_payoff, want.human_payoff) || !near(got.agent_payoff, want.agent_payoff)) {
      return fail(k, "payoffs differ");
    }
    if (!near(got.human_total, want.human_total) || !near(got.agent_total, want.agent_total)) {
      return fail(k, "cumulative scores differ");
    }
    if (!want.posterior.empty()) {
      if (want.posterior.size() != got.posterior.size()) return fail(k, "posterior size differs");
      // Stored as a JSON object, so the order of types is not preserved.
      for (const auto& [name, p] : got.posterior) {
        auto it = std::find_if(want.posterior.begin(), want.posterior.end(),
                               [&](const auto& e) { return e.first == name; });
        if (it == want.posterior.end() || std::abs(p - it->second) > 1e-9) {
          return fail(k, "posterior differs at type " + name);
        }
      }
    }
    ++check.rounds;
  }
  return check;
}

MatchStats match_stats(const MatchRecord& record) {
  MatchStats s;
  std::vector<std::vector<double>> trace;
  for (const auto& r : record.history) {
    s.human_total += r.human_payoff;
    s.agent_total += r.agent_payoff;
    if (r.human_payoff > r.agent_payoff) {
      ++s.wins;
    } else if (r.human_payoff < r.agent_payoff) {
      ++s.losses;
    } else {
      ++s.draws;
    }
    if (!r.posterior.empty()) {
      std::vector<double> probs;
      for (const auto& [name, p] : r.posterior) probs.push_back(p);
      trace.push_back(std::move(probs));
    }
  }
  s.welfare = s.human_total + s.agent_total;
  s.fairness = s.human_total * s.agent_total;
  if (!trace.empty()) s.switches = type_switch_stats(trace);
  return s;
}

}  // namespace hba
