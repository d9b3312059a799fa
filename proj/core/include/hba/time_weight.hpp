#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace hba {

// Nonincreasing, nonnegative weight f(xi) over lags xi >= 1.
class TimeWeight {
 public:
  // f(xi) = max[0, a - b (xi - 1)^c] with a, b, c >= 0.
  static TimeWeight general(double a, double b, double c);
  // f(xi) = [xi < limit].
  static TimeWeight window(std::size_t limit);
  // f(xi) = value for every lag.
  static TimeWeight constant(double value = 1.0);

  double operator()(std::size_t xi) const;

  // Largest lag with f > 0, or nullopt if f never reaches zero.
  std::optional<std::size_t> support() const { return support_; }

  std::string describe() const;

  enum class Kind { kGeneral, kWindow, kConstant };
  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

 private:
  TimeWeight(Kind kind, double a, double b, double c);
  Kind kind_;
  double a_, b_, c_;
  std::optional<std::size_t> support_;
};

}  // namespace hba
