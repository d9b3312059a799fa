#pragma once

// A repeated matrix game between a human (player 0) and an agent (player 1):
// the live match driver, its persisted record, and replay checks.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hba/agents.hpp"

namespace hba {

inline constexpr int kHumanPlayer = 0;
inline constexpr int kAgentPlayer = 1;

struct RoundRecord {
  int round = 0;  // 1-based
  Action human = 0;
  Action agent = 0;
  double human_payoff = 0.0;
  double agent_payoff = 0.0;
  double human_total = 0.0;
  double agent_total = 0.0;
  // Type posterior over the human after this round.
  std::vector<std::pair<std::string, double>> posterior;
  std::string time;  // ISO-8601 UTC, empty when not recorded
};

struct MatchRecord {
  std::string session;
  int match_index = 0;
  std::string game;  // "PD" or "RPS"
  int rounds = 20;
  std::uint64_t seed = 0;
  std::string opponent;  // "HBA", "JAL" or "CJAL"
  std::string started;
  std::vector<RoundRecord> history;
};

nlohmann::json to_json(const MatchRecord& record);
// Throws ConfigError on missing or ill-typed fields.
MatchRecord match_record_from_json(const nlohmann::json& j);
// Parses a record file's text; malformed JSON reports the byte offset.
MatchRecord parse_match_record(const std::string& text, const std::string& source = "record");

// Runs one match. The agent's action for a round is fixed before the human's
// action is read, from the seed and the history so far only.
class LiveMatch {
 public:
  LiveMatch(const std::string& game, std::string opponent, std::uint64_t seed, int rounds = 20);
  LiveMatch(const LiveMatch&) = delete;
  LiveMatch& operator=(const LiveMatch&) = delete;

  // The agent's action for the current round.
  Action committed_action() const { return committed_; }
  // Plays the current round; throws MatchOver after the last round and
  // ConfigError for an action outside the game.
  const RoundRecord& play(Action human, std::string time = {});

  // Session bookkeeping copied into the record.
  void set_origin(std::string session, int match_index, std::string started);

  bool finished() const;
  int round() const { return static_cast<int>(history_.time()); }  // rounds played
  const MatrixGame& game() const { return game_; }
  const MatchRecord& record() const { return record_; }
  // Per-round posterior trace over the human's types.
  const std::vector<std::vector<double>>& posterior_trace() const { return trace_; }

 private:
  void commit();

  MatrixGame game_;
  std::unique_ptr<MatrixAgent> agent_;
  History<MatrixState> history_;
  TypePosterior<MatrixState> shadow_;
  MatchRecord record_;
  std::vector<std::vector<double>> trace_;
  Action committed_ = 0;
};

struct ReplayCheck {
  bool ok = true;
  std::size_t rounds = 0;
  std::string mismatch;  // first difference, empty when ok
};

// Re-runs the agent on the recorded human actions and compares actions,
// payoffs, running totals and posterior snapshots.
ReplayCheck verify_match_record(const MatchRecord& record);

struct MatchStats {
  double human_total = 0.0;
  double agent_total = 0.0;
  double welfare = 0.0;   // sum of both totals
  double fairness = 0.0;  // product of both totals
  int wins = 0;           // rounds where the human earned more than the agent
  int draws = 0;
  int losses = 0;
  TypeSwitchStats switches;  // of the human, from the posterior snapshots
};

MatchStats match_stats(const MatchRecord& record);

}  // namespace hba
