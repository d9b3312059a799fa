#include "hba/time_weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hba/errors.hpp"

namespace hba {

TimeWeight::TimeWeight(Kind kind, double a, double b, double c)
    : kind_(kind), a_(a), b_(b), c_(c) {
  switch (kind_) {
    case Kind::kConstant:
      if (a_ <= 0.0) support_ = 0;
      break;
    case Kind::kWindow:
      support_ = static_cast<std::size_t>(a_) > 0 ? static_cast<std::size_t>(a_) - 1 : 0;
      break;
    case Kind::kGeneral: {
      if (a_ <= 0.0) {
        support_ = 0;
      } else if (b_ > 0.0 && c_ > 0.0) {
        // a - b (xi-1)^c > 0  <=>  xi - 1 < (a/b)^(1/c); start from the
        // closed form and correct for rounding.
        const double root = std::pow(a_ / b_, 1.0 / c_);
        // Past any reachable history length the cutoff changes nothing.
        if (!(root < 1e12)) break;
        auto xi = static_cast<std::size_t>(std::floor(root)) + 1;
        while (xi > 1 && (*this)(xi) <= 0.0) --xi;
        while ((*this)(xi + 1) > 0.0) ++xi;
        support_ = (*this)(xi) > 0.0 ? xi : 0;
      } else if (b_ > 0.0 && c_ == 0.0) {
        // (xi-1)^0 = 1 everywhere, so f is the constant a - b.
        if (a_ - b_ <= 0.0) support_ = 0;
      }
      break;
    }
  }
}

TimeWeight TimeWeight::general(double a, double b, double c) {
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    throw ConfigError("general time weight needs a, b, c >= 0");
  }
  return TimeWeight(Kind::kGeneral, a, b, c);
}

TimeWeight TimeWeight::window(std::size_t limit) {
  return TimeWeight(Kind::kWindow, static_cast<double>(limit), 0.0, 0.0);
}

TimeWeight TimeWeight::constant(double value) {
  if (value < 0.0) throw ConfigError("constant time weight must be >= 0");
  return TimeWeight(Kind::kConstant, value, 0.0, 0.0);
}

double TimeWeight::operator()(std::size_t xi) const {
  switch (kind_) {
    case Kind::kConstant:
      return a_;
    case Kind::kWindow:
      return static_cast<double>(xi) < a_ ? 1.0 : 0.0;
    case Kind::kGeneral:
      return std::max(0.0, a_ - b_ * std::pow(static_cast<double>(xi) - 1.0, c_));
  }
  return 0.0;
}

std::string TimeWeight::describe() const {
  std::ostringstream s;
  switch (kind_) {
    case Kind::kConstant:
      s << "constant(" << a_ << ")";
      break;
    case Kind::kWindow:
      s << "window(" << a_ << ")";
      break;
    case Kind::kGeneral:
      s << "general(a=" << a_ << ", b=" << b_ << ", c=" << c_ << ")";
      break;
  }
  return s.str();
}

}  // namespace hba
