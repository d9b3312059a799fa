#include "hba/service.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hba/json_util.hpp"
#include "hba/log.hpp"

namespace hba {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kMatchesPerSession = 2;

std::string alias(int match_index) { return match_index == 0 ? "Opponent A" : "Opponent B"; }

std::string hex_id(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

std::string canonical_game(const json& body) {
  if (!body.is_object() || !body.contains("game") || !body["game"].is_string()) {
    throw ServiceError(400, "invalid_game", "request needs a string field 'game' (PD or RPS)");
  }
  std::string g = body["game"].get<std::string>();
  std::transform(g.begin(), g.end(), g.begin(), [](unsigned char c) { return std::toupper(c); });
  if (g != "PD" && g != "RPS") {
    throw ServiceError(400, "invalid_game", "unknown game '" + body["game"].get<std::string>() + "'");
  }
  return g;
}

json round_json(const MatrixGame& game, const RoundRecord& r, int match_index) {
  return {{"match", match_index + 1},
          {"round", r.round},
          {"human", game.action_label(kHumanPlayer, r.human)},
          {"opponent", game.action_label(kAgentPlayer, r.agent)},
          {"human_payoff", r.human_payoff},
          {"opponent_payoff", r.agent_payoff},
          {"human_total", r.human_total},
          {"opponent_total", r.agent_total}};
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms
      << 'Z';
  return out.str();
}

struct MatchService::Session {
  std::string id;
  std::string game;
  std::uint64_t seed = 0;
  std::vector<std::string> order;  // opponent labels, match order
  std::string created;
  std::vector<std::unique_ptr<LiveMatch>> matches;
  int current = 0;
  std::mutex move_mu;           // one move in flight
  mutable std::mutex state_mu;  // guards everything above for readers

  bool finished() const {
    return current >= kMatchesPerSession - 1 && matches.size() == kMatchesPerSession &&
           matches.back()->finished();
  }
};

MatchService::MatchService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.data_dir.empty()) {
    fs::create_directories(fs::path(options_.data_dir) / "records");
    recover();
  }
}

MatchService::~MatchService() = default;

std::shared_ptr<MatchService::Session> MatchService::open_session(const std::string& id,
                                                                  const std::string& game,
                                                                  std::uint64_t seed,
                                                                  std::vector<std::string> order) {
  auto s = std::make_shared<Session>();
  s->id = id;
  s->game = game;
  s->seed = seed;
  s->order = std::move(order);
  s->created = utc_timestamp();
  for (int m = 0; m < kMatchesPerSession; ++m) {
    s->matches.push_back(std::make_unique<LiveMatch>(
        game, s->order[static_cast<std::size_t>(m)],
        derive_seed(seed, 1000 + static_cast<std::uint64_t>(m)), options_.rounds));
    s->matches.back()->set_origin(id, m, s->created);
  }
  return s;
}

json MatchService::create_session(const json& body) {
  const std::string game = canonical_game(body);
  std::uint64_t n;
  {
    std::lock_guard lock(mu_);
    n = counter_++;
  }
  const std::uint64_t seed = derive_seed(options_.seed, n);
  const std::string id = hex_id(derive_seed(seed, Stream::kScenario, 7));
  const MatrixGame g = MatrixGame::by_name(game);
  std::vector<std::string> order{"HBA", baseline_for(g)};
  Rng rng(derive_seed(seed, Stream::kScenario));
  if (rng.bernoulli(0.5)) std::swap(order[0], order[1]);

  auto s = open_session(id, game, seed, order);
  {
    std::lock_guard lock(mu_);
    sessions_[id] = s;
  }
  append_log({{"event", "create"},
              {"id", id},
              {"game", game},
              {"seed", seed},
              {"order", order},
              {"rounds", options_.rounds},
              {"time", s->created}});
  log::info("session ", id, " created (", game, ")");
  std::lock_guard lock(s->state_mu);
  return view_of(*s);
}

std::shared_ptr<MatchService::Session> MatchService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + id + "'");
  return it->second;
}

json MatchService::submit_move(const std::string& id, const json& body) {
  auto s = find(id);
  std::unique_lock move(s->move_mu, std::try_to_lock);
  if (!move.owns_lock()) {
    throw ServiceError(409, "move_in_progress", "another move for this session is in flight");
  }
  if (!body.is_object() || !body.contains("action")) {
    throw ServiceError(400, "invalid_action", "request needs a field 'action'");
  }

  std::unique_lock state(s->state_mu);
  if (s->finished()) throw ServiceError(409, "session_finished", "both matches are over");
  LiveMatch& match = *s->matches[static_cast<std::size_t>(s->current)];
  const MatrixGame& game = match.game();
  const int next_round = match.round() + 1;
  if (body.contains("round")) {
    if (!body["round"].is_number_integer() || body["round"].get<int>() != next_round) {
      throw ServiceError(409, "stale_round",
                         "move is for round " + body["round"].dump() + ", current round is " +
                             std::to_string(next_round));
    }
  }
  if (body.contains("match")) {
    if (!body["match"].is_number_integer() || body["match"].get<int>() != s->current + 1) {
      throw ServiceError(409, "stale_round", "move is for another match");
    }
  }
  Action human = -1;
  const auto& a = body["action"];
  if (a.is_string()) {
    std::string label = a.get<std::string>();
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    human = game.action_from_label(label);
  } else if (a.is_number_integer()) {
    human = a.get<int>();
    if (human < 0 || human >= game.num_actions(kHumanPlayer)) human = -1;
  }
  if (human < 0) {
    throw ServiceError(400, "invalid_action", "action " + a.dump() + " is not legal in " + game.id());
  }

  // The agent's action was fixed before this request was read.
  const Action committed = match.committed_action();
  const RoundRecord& row = match.play(human, utc_timestamp());
  append_log({{"event", "move"},
              {"id", id},
              {"match", s->current},
              {"round", row.round},
              {"human", human},
              {"agent", committed},
              {"time", row.time}});

  json out{{"result", round_json(game, row, s->current)}};
  out["match_complete"] = match.finished();
  if (match.finished()) {
    store_record(match.record());
    const auto stats = match_stats(match.record());
    out["match_summary"] = {{"match", s->current + 1},
                            {"opponent", alias(s->current)},
                            {"human_total", stats.human_total},
                            {"opponent_total", stats.agent_total}};
    if (s->current + 1 < kMatchesPerSession) ++s->current;
  }
  out["session"] = view_of(*s);
  return out;
}

json MatchService::view_of(const Session& s) const {
  const LiveMatch& match = *s.matches[static_cast<std::size_t>(s.current)];
  const MatrixGame& game = match.game();
  json history = json::array();
  for (const auto& r : match.record().history) history.push_back(round_json(game, r, s.current));
  json completed = json::array();
  for (int m = 0; m < kMatchesPerSession; ++m) {
    const auto& lm = *s.matches[static_cast<std::size_t>(m)];
    if (!lm.finished()) continue;
    const auto& h = lm.record().history;
    completed.push_back({{"match", m + 1},
                         {"opponent", alias(m)},
                         {"human_total", h.back().human_total},
                         {"opponent_total", h.back().agent_total}});
  }
  const auto& h = match.record().history;
  const bool done = s.finished();
  return {{"schema", "hba.session/1"},
          {"id", s.id},
          {"game", s.game},
          {"actions", game.labels()},
          {"matches", kMatchesPerSession},
          {"rounds_per_match", game.rounds()},
          {"status", done ? "finished" : "active"},
          {"match", s.current + 1},
          {"round", done ? game.rounds() : match.round() + 1},
          {"opponent", alias(s.current)},
          {"scores",
           {{"human", h.empty() ? 0.0 : h.back().human_total},
            {"opponent", h.empty() ? 0.0 : h.back().agent_total}}},
          {"history", history},
          {"completed", completed}};
}

json MatchService::session_view(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mu);
  return view_of(*s);
}

json MatchService::session_summary(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mu);
  if (!s->finished()) {
    throw ServiceError(409, "session_incomplete", "summary is available after both matches");
  }
  json matches = json::array();
  double human = 0.0, opponents = 0.0;
  for (int m = 0; m < kMatchesPerSession; ++m) {
    const auto& record = s->matches[static_cast<std::size_t>(m)]->record();
    const auto stats = match_stats(record);
    human += stats.human_total;
    opponents += stats.agent_total;
    const double rounds = static_cast<double>(record.history.size());
    matches.push_back({{"match", m + 1},
                       {"alias", alias(m)},
                       {"opponent", record.opponent},
                       {"human_total", stats.human_total},
                       {"opponent_total", stats.agent_total},
                       {"welfare", stats.welfare},
                       {"fairness", stats.fairness},
                       {"wins", stats.wins},
                       {"draws", stats.draws},
                       {"losses", stats.losses},
                       {"human_win_rate", stats.wins / rounds},
                       {"opponent_win_rate", stats.losses / rounds},
                       {"type_switch",
                        {{"types", stats.switches.types},
                         {"mean_duration", stats.switches.mean_duration}}},
                       {"record", to_json(record)}});
  }
  return {{"schema", "hba.summary/1"},
          {"id", s->id},
          {"game", s->game},
          {"matches", matches},
          {"totals", {{"human", human}, {"opponents", opponents}, {"welfare", human + opponents}}}};
}

json MatchService::health() const {
  return {{"status", "ok"}, {"sessions", session_count()}, {"schema", "hba.health/1"}};
}

std::size_t MatchService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

// ---- persistence ------------------------------------------------------------------

void MatchService::append_log(const json& event) {
  if (options_.data_dir.empty()) return;
  std::lock_guard lock(log_mu_);
  std::ofstream out(fs::path(options_.data_dir) / "sessions.jsonl", std::ios::app | std::ios::binary);
  out << event.dump() << '\n';
  out.flush();
  if (!out) log::error("cannot append to the session log in ", options_.data_dir);
}

void MatchService::store_record(const MatchRecord& record) {
  if (options_.data_dir.empty()) return;
  const auto path = fs::path(options_.data_dir) / "records" /
                    (record.session + "-m" + std::to_string(record.match_index + 1) + ".json");
  std::ofstream out(path, std::ios::binary);
  out << to_json(record).dump(2) << '\n';
  if (!out) log::error("cannot write ", path.string());
}

void MatchService::recover() {
  const auto path = fs::path(options_.data_dir) / "sessions.jsonl";
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json e;
    try {
      e = json::parse(line);
    } catch (const json::exception&) {
      // A crash can leave a torn last line.
      log::warn("session log line ", line_no, " is corrupt, skipped");
      continue;
    }
    try {
      const std::string kind = e.at("event").get<std::string>();
      const std::string id = e.at("id").get<std::string>();
      if (kind == "create") {
        auto s = open_session(id, e.at("game").get<std::string>(), e.at("seed").get<std::uint64_t>(),
                              e.at("order").get<std::vector<std::string>>());
        if (e.contains("time")) s->created = e["time"].get<std::string>();
        sessions_[id] = s;
        ++counter_;
        ++recovered_;
      } else if (kind == "move") {
        auto it = sessions_.find(id);
        if (it == sessions_.end()) continue;
        Session& s = *it->second;
        const int m = e.at("match").get<int>();
        if (m != s.current || s.finished()) continue;
        LiveMatch& match = *s.matches[static_cast<std::size_t>(m)];
        if (match.committed_action() != e.at("agent").get<int>()) {
          log::warn("session ", id, ": replayed agent action differs at round ",
                    e.at("round").get<int>(), ", move dropped");
          continue;
        }
        match.play(e.at("human").get<int>(), e.value("time", ""));
        if (match.finished() && s.current + 1 < kMatchesPerSession) ++s.current;
      }
    } catch (const std::exception& ex) {
      log::warn("session log line ", line_no, ": ", ex.what());
    }
  }
  log::info("recovered ", recovered_, " sessions from ", path.string());
}

}  // namespace hba
