#pragma once

// Ready-made agents for both domains.

#include <memory>
#include <string>
#include <vector>

#include "hba/conceptual.hpp"
#include "hba/matrix_types.hpp"
#include "hba/planner.hpp"
#include "hba/rl.hpp"

namespace hba {

// ---- repeated matrix games ----------------------------------------------

// A player choosing uniformly among the maximisers of the exact planner's
// values under its opponent model.
class MatrixAgent final : public Controller<MatrixState> {
 public:
  MatrixAgent(std::string label, const MatrixGame& game, int self,
              std::unique_ptr<OpponentModel<MatrixState>> model, int lookahead);

  Distribution policy(const MatchView& h, int player, int own_type, Rng& rng) override;
  void observe(const MatchView& h, int player, std::span<const double> payoffs) override;

  const std::string& label() const { return label_; }
  const std::vector<double>& last_values() const { return values_; }
  const OpponentModel<MatrixState>& model() const { return *model_; }
  int lookahead() const { return lookahead_; }

 private:
  std::string label_;
  const MatrixGame& game_;
  int self_;
  std::unique_ptr<OpponentModel<MatrixState>> model_;
  int lookahead_;
  std::vector<double> values_;
};

// TR posterior with f(xi) = max[0, 10 - 0.05 (xi - 1)^3].
PosteriorConfig match_posterior_config();

// Planning horizon per game: 10 for PD, 1 for RPS.
int default_lookahead(const MatrixGame& game);

// Opponent models on the previous joint action; the first round is never
// counted, so it always predicts uniform.
std::unique_ptr<OpponentModel<MatrixState>> make_frequency_model(const MatrixGame& game, int self,
                                                                 bool conditional);
std::unique_ptr<OpponentModel<MatrixState>> make_posterior_model(const MatrixGame& game, int self,
                                                                 MatrixTypeSpace types,
                                                                 PosteriorConfig config);

// "HBA" (default types, match posterior), "JAL" or "CJAL".
std::unique_ptr<MatrixAgent> make_matrix_agent(const std::string& label, const MatrixGame& game,
                                               int self, int lookahead = 0);

// The learner the human faces besides HBA: CJAL for PD, JAL for RPS.
std::string baseline_for(const MatrixGame& game);

// ---- level-based foraging -------------------------------------------------

using ForagingController = Controller<ForagingState>;
using ForagingAgent = RlAgent<ForagingState>;

struct ForagingAgentOptions {
  RlParams params;
  // Hypothesised types for every other player; H1-H4 with unlimited sight if
  // empty.
  ForagingTypeSpace hypotheses;
  // True programs per player and type index, for the "Cor" agent.
  std::vector<ForagingTypeSpace> truth;
  TimeWeight tr_weight = TimeWeight::general(10.0, 0.01, 3.0);
  std::size_t window = 9;
};

// Labels: Gtw (TR posterior), Unl (product posterior), Lim (product over the
// last 9 steps), Cor (knows the true types), JAL, CJAL, WoLF, and HBA-c1 ..
// HBA-c4 (a single conceptual type per opponent).
std::unique_ptr<ForagingAgent> make_foraging_agent(const std::string& label,
                                                   const ForagingGame& game, int self,
                                                   const ForagingAgentOptions& options = {});

std::vector<std::string> foraging_agent_labels();

// Program for an opponent type in the evaluation: H1..H4 with optional sight
// "(sigma)", or the learners JAL / CJAL.
std::unique_ptr<ForagingController> make_foraging_program(const std::string& type_name,
                                                          const ForagingGame& game, int player,
                                                          const RlParams& params = {});

// Whether `type_name` is a stateless type usable by the "Cor" agent.
bool stateless_foraging_type(const std::string& type_name);

}  // namespace hba
