#include "hba/rl.hpp"

#include <algorithm>

namespace hba {

int QTable::intern(const std::string& key) {
  auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(rows_.size()));
  if (inserted) rows_.emplace_back(width_, 0.0);
  return it->second;
}

int QTable::find(const std::string& key) const {
  auto it = ids_.find(key);
  return it == ids_.end() ? -1 : it->second;
}

double QTable::get(int id, std::size_t action) const {
  if (id < 0 || static_cast<std::size_t>(id) >= rows_.size()) return 0.0;
  return rows_[static_cast<std::size_t>(id)][action];
}

void EligibilityTrace::set(int state, std::size_t action, double value) {
  for (auto& e : entries_) {
    if (e.state == state && e.action == action) {
      e.value = value;
      return;
    }
  }
  entries_.push_back({state, action, value});
}

double EligibilityTrace::get(int state, std::size_t action) const {
  for (const auto& e : entries_) {
    if (e.state == state && e.action == action) return e.value;
  }
  return 0.0;
}

double update_q(QTable& q, EligibilityTrace& trace, int state, std::size_t action, double reward,
                double next_value, const RlParams& params) {
  const double delta =
      params.beta * (reward + params.gamma * next_value - q.get(state, action));
  trace.set(state, action, 1.0);
  auto& entries = trace.entries();
  for (auto& e : entries) {
    if (e.value < params.e_min) continue;
    q.at(e.state, e.action) += delta * e.value;
    e.value *= params.lambda;
  }
  std::erase_if(entries, [&](const auto& e) { return e.value < params.e_min; });
  return delta;
}

void wolf_phc_step(WolfPolicy& policy, std::span<const double> q, double delta_win,
                   double delta_lose) {
  const std::size_t n = policy.pi.size();
  ++policy.visits;
  for (std::size_t a = 0; a < n; ++a) {
    policy.average[a] += (policy.pi[a] - policy.average[a]) / static_cast<double>(policy.visits);
  }
  double current = 0.0;
  double average = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    current += policy.pi[a] * q[a];
    average += policy.average[a] * q[a];
  }
  const double delta = current > average ? delta_win : delta_lose;
  if (n < 2) return;
  const std::size_t best = argmax_set(q).front();
  double moved = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (a == best) continue;
    const double step = std::min(policy.pi[a], delta / static_cast<double>(n - 1));
    policy.pi[a] -= step;
    moved += step;
  }
  policy.pi[best] += moved;
}

}  // namespace hba
