#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace diskpot {

// Exact rational arithmetic for coefficients, exponents and moment-map
// coordinates.  Header-only boost backend, so nothing to link.
using Rat = boost::multiprecision::cpp_rational;

// "p" or "p/q" with q > 0 and gcd(p, q) = 1; throws ParseError otherwise.
Rat parse_rational(const std::string& text);

// Canonical form: reduced fraction, "p" when the denominator is 1.
std::string rat_to_string(const Rat& value);

double rat_to_double(const Rat& value);

// A rational extended by +infinity.  Used for T-adic valuations (the zero
// element has valuation +infinity) and for working precisions (exact data has
// infinite precision).  Supports exactly the arithmetic those uses need:
// total order, addition, and min.
class Level {
public:
  Level() : finite_(true), value_(0) {}
  /* implicit */ Level(Rat value) : finite_(true), value_(std::move(value)) {}
  /* implicit */ Level(int value) : finite_(true), value_(value) {}

  static Level infinity() {
    Level l;
    l.finite_ = false;
    l.value_ = 0;
    return l;
  }

  bool is_finite() const { return finite_; }

  // Only meaningful when finite.
  const Rat& finite_value() const;

  friend bool operator==(const Level& a, const Level& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const Level& a, const Level& b) { return !(a == b); }
  friend bool operator<(const Level& a, const Level& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Level& a, const Level& b) { return !(b < a); }
  friend bool operator>(const Level& a, const Level& b) { return b < a; }
  friend bool operator>=(const Level& a, const Level& b) { return !(a < b); }

  friend Level operator+(const Level& a, const Level& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return Level(a.value_ + b.value_);
  }
  friend Level operator-(const Level& a, const Rat& b) {
    if (!a.finite_) return infinity();
    return Level(a.value_ - b);
  }

  friend Level min(const Level& a, const Level& b) { return a < b ? a : b; }
  friend Level max(const Level& a, const Level& b) { return a < b ? b : a; }

  // "p", "p/q" or "inf".
  std::string str() const;

private:
  bool finite_;
  Rat value_;
};

}  // namespace diskpot
