#pragma once

// Sessions of the human-versus-agent protocol: a human picks PD or RPS and
// plays two 20-round matches, one against HBA and one against the game's
// baseline learner, in seeded random order. Opponent identities stay hidden
// until both matches are over.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hba/match_record.hpp"

namespace hba {

// Failure of a service call with its HTTP status and a stable error code.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

struct ServiceOptions {
  std::uint64_t seed = 1;
  int rounds = 20;
  // Directory for the append-only session log and finished match records;
  // empty keeps everything in memory.
  std::string data_dir;
};

class MatchService {
 public:
  explicit MatchService(ServiceOptions options);
  ~MatchService();

  // {"game": "PD" | "RPS"} -> session view.
  nlohmann::json create_session(const nlohmann::json& body);
  // {"action": label or index, "round": optional 1-based round} -> round result.
  nlohmann::json submit_move(const std::string& id, const nlohmann::json& body);
  nlohmann::json session_view(const std::string& id) const;
  // Totals, welfare, win/draw/loss counts, type-switch statistics and the
  // revealed opponents; only after both matches.
  nlohmann::json session_summary(const std::string& id) const;
  nlohmann::json health() const;

  std::size_t session_count() const;
  // Sessions restored from the log at start-up.
  std::size_t recovered() const { return recovered_; }

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<Session> open_session(const std::string& id, const std::string& game,
                                        std::uint64_t seed, std::vector<std::string> order);
  void append_log(const nlohmann::json& event);
  void recover();
  void store_record(const MatchRecord& record);
  nlohmann::json view_of(const Session& s) const;

  ServiceOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::mutex log_mu_;
  std::size_t recovered_ = 0;
};

// Current UTC time as ISO-8601 with milliseconds.
std::string utc_timestamp();

}  // namespace hba
