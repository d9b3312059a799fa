#include "hba/behavior.hpp"

#include <algorithm>
#include <cmath>

namespace hba {

std::vector<std::size_t> argmax_set(std::span<const double> values, double tolerance) {
  std::vector<std::size_t> best;
  if (values.empty()) return best;
  const double top = *std::max_element(values.begin(), values.end());
  const double slack = tolerance * std::max(1.0, std::abs(top));
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] >= top - slack) best.push_back(k);
  }
  return best;
}

std::size_t sample_argmax(std::span<const double> values, Rng& rng, double tolerance) {
  const auto best = argmax_set(values, tolerance);
  if (best.size() == 1) return best.front();
  return best[rng.index(best.size())];
}

}  // namespace hba
