#pragma once

#include <algorithm>
#include <complex>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "diskpot/errors.hpp"
#include "diskpot/rational.hpp"

namespace diskpot {

// Coefficient-field plumbing for the series template below.  The exact
// instantiation works over the rationals; the numeric one over complex
// doubles with a fixed drop tolerance (documented, not configurable: it is
// the working definition of "zero" for floating-point coefficients).
template <typename C>
struct series_traits;

template <>
struct series_traits<Rat> {
  static bool is_zero(const Rat& c) { return c == 0; }
  static Rat one() { return Rat(1); }
  static Rat inverse(const Rat& c) { return Rat(1) / c; }
  static std::string str(const Rat& c) { return rat_to_string(c); }
};

template <>
struct series_traits<std::complex<double>> {
  static constexpr double zero_tolerance = 1e-12;
  static bool is_zero(const std::complex<double>& c) {
    return std::abs(c) <= zero_tolerance;
  }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static std::complex<double> inverse(const std::complex<double>& c) {
    return series_traits::one() / c;
  }
  static std::string str(const std::complex<double>& c) {
    char buf[64];
    if (std::abs(c.imag()) <= zero_tolerance) {
      std::snprintf(buf, sizeof buf, "%.12g", c.real());
    } else {
      std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)", c.real(), c.imag());
    }
    return buf;
  }
};

// A finite T-adic series  sum_i c_i T^(e_i)  with exact rational exponents,
// truncated at an explicit precision: the element is known modulo
// T^(precision).  Exact inputs carry precision +inf.  Invariants:
//   - exponents strictly increasing, no zero coefficients,
//   - every stored exponent lies strictly below the precision.
// The zero element is the empty sum; its valuation is +inf by convention,
// whatever its precision.  Negative exponents are allowed (field elements);
// the Lambda_0 / Lambda_+ membership tests below ask for more.
template <typename C>
class BasicSeries {
public:
  using Coef = C;
  using Term = std::pair<Rat, C>;

  BasicSeries() : precision_(Level::infinity()) {}

  static BasicSeries zero(Level precision = Level::infinity()) {
    BasicSeries s;
    s.precision_ = precision;
    return s;
  }

  static BasicSeries constant(C value, Level precision = Level::infinity()) {
    return term(std::move(value), Rat(0), precision);
  }

  static BasicSeries term(C coefficient, Rat exponent,
                          Level precision = Level::infinity()) {
    BasicSeries s;
    s.precision_ = precision;
    if (!series_traits<C>::is_zero(coefficient) &&
        Level(exponent) < precision) {
      s.terms_.emplace_back(std::move(exponent), std::move(coefficient));
    }
    return s;
  }

  static BasicSeries t_power(Rat exponent,
                             Level precision = Level::infinity()) {
    return term(series_traits<C>::one(), std::move(exponent), precision);
  }

  const std::vector<Term>& terms() const { return terms_; }
  Level precision() const { return precision_; }
  bool is_zero() const { return terms_.empty(); }

  // +inf for the (possibly truncated) zero element.
  Level valuation() const {
    return terms_.empty() ? Level::infinity() : Level(terms_.front().first);
  }

  // Valuation capped by the precision: the largest exponent level at which
  // the element is certainly understood.  A truncated zero has effective
  // valuation equal to its precision.
  Level effective_valuation() const { return min(valuation(), precision_); }

  const Rat& leading_exponent() const {
    require_nonzero();
    return terms_.front().first;
  }
  const C& leading_coefficient() const {
    require_nonzero();
    return terms_.front().second;
  }

  C coefficient_at(const Rat& exponent) const {
    for (const Term& t : terms_) {
      if (t.first == exponent) return t.second;
      if (t.first > exponent) break;
    }
    return C{};
  }

  bool in_lambda0() const {
    return terms_.empty() || terms_.front().first >= 0;
  }
  bool in_lambda_plus() const {
    return terms_.empty() || terms_.front().first > 0;
  }
  // Unit of Lambda_0: valuation exactly zero (certainly, not just up to
  // precision).
  bool is_unit() const {
    return !terms_.empty() && terms_.front().first == 0;
  }

  BasicSeries truncated(Level precision) const {
    BasicSeries s;
    s.precision_ = min(precision_, precision);
    for (const Term& t : terms_) {
      if (Level(t.first) < s.precision_) {
        s.terms_.push_back(t);
      } else {
        break;
      }
    }
    return s;
  }

  // The exact polynomial representative below `level`: terms at or above it
  // are dropped, but no precision mark is attached — use this to choose a
  // representative, truncated() to record a limit of knowledge.
  BasicSeries polynomial_part(Level level) const {
    BasicSeries s;
    s.precision_ = precision_;
    for (const Term& t : terms_) {
      if (Level(t.first) < level) {
        s.terms_.push_back(t);
      } else {
        break;
      }
    }
    return s;
  }

  // Multiplication by T^(delta).  Shifts the precision along with the terms:
  // if a is known mod T^p, then T^d a is known mod T^(p+d).
  BasicSeries shifted(const Rat& delta) const {
    BasicSeries s;
    s.precision_ =
        precision_.is_finite() ? Level(precision_.finite_value() + delta)
                               : Level::infinity();
    s.terms_.reserve(terms_.size());
    for (const Term& t : terms_) {
      s.terms_.emplace_back(t.first + delta, t.second);
    }
    return s;
  }

  friend BasicSeries operator-(const BasicSeries& a) {
    BasicSeries s = a;
    for (Term& t : s.terms_) t.second = -t.second;
    return s;
  }

  friend BasicSeries operator+(const BasicSeries& a, const BasicSeries& b) {
    BasicSeries s;
    s.precision_ = min(a.precision_, b.precision_);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      const bool take_a =
          j >= b.terms_.size() ||
          (i < a.terms_.size() && a.terms_[i].first <= b.terms_[j].first);
      const bool take_b =
          i >= a.terms_.size() ||
          (j < b.terms_.size() && b.terms_[j].first <= a.terms_[i].first);
      Rat e;
      C c{};
      if (take_a && take_b) {
        e = a.terms_[i].first;
        c = a.terms_[i].second + b.terms_[j].second;
        ++i;
        ++j;
      } else if (take_a) {
        e = a.terms_[i].first;
        c = a.terms_[i].second;
        ++i;
      } else {
        e = b.terms_[j].first;
        c = b.terms_[j].second;
        ++j;
      }
      if (Level(e) >= s.precision_) break;
      if (!series_traits<C>::is_zero(c)) s.terms_.emplace_back(e, c);
    }
    return s;
  }

  friend BasicSeries operator-(const BasicSeries& a, const BasicSeries& b) {
    return a + (-b);
  }

  // Cauchy product.  The result is determined modulo
  //   min(prec(a) + val(b), prec(b) + val(a))
  // with valuations capped at the respective precisions, so that the product
  // of two truncated zeros is known only mod T^(prec(a)+prec(b)).
  friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b) {
    BasicSeries s;
    s.precision_ = min(a.precision_ + b.effective_valuation(),
                       b.precision_ + a.effective_valuation());
    std::vector<Term> acc;
    for (const Term& ta : a.terms_) {
      for (const Term& tb : b.terms_) {
        Rat e = ta.first + tb.first;
        if (Level(e) >= s.precision_) continue;
        acc.emplace_back(std::move(e), ta.second * tb.second);
      }
    }
    std::sort(acc.begin(), acc.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    for (Term& t : acc) {
      if (!s.terms_.empty() && s.terms_.back().first == t.first) {
        s.terms_.back().second += t.second;
        if (series_traits<C>::is_zero(s.terms_.back().second)) {
          s.terms_.pop_back();
        }
      } else if (!series_traits<C>::is_zero(t.second)) {
        s.terms_.push_back(std::move(t));
      }
    }
    return s;
  }

  BasicSeries scaled(const C& factor) const {
    BasicSeries s;
    s.precision_ = precision_;
    if (series_traits<C>::is_zero(factor)) return s;
    s.terms_.reserve(terms_.size());
    for (const Term& t : terms_) {
      C c = t.second * factor;
      if (!series_traits<C>::is_zero(c)) s.terms_.emplace_back(t.first, c);
    }
    return s;
  }

  BasicSeries pow(unsigned exponent) const {
    BasicSeries r = constant(series_traits<C>::one());
    for (unsigned k = 0; k < exponent; ++k) r = r * *this;
    return r;
  }

  // Inverse of a unit of Lambda_0, computed to min(target, prec(this)) by a
  // geometric series in the positive-valuation tail.  A non-constant unit has
  // an infinite inverse, so that case demands a finite precision.
  BasicSeries invert_unit(Level target = Level::infinity()) const {
    if (!is_unit()) {
      fail("not_a_unit",
           "cannot invert a series of nonzero valuation: " + str());
    }
    const C lead = terms_.front().second;
    const C lead_inv = series_traits<C>::inverse(lead);
    BasicSeries tail = *this;
    tail.terms_.erase(tail.terms_.begin());
    if (tail.terms_.empty()) {
      // Constant unit: exact inverse at the same precision.
      return constant(lead_inv, min(precision_, target));
    }
    const Level goal = min(precision_, target);
    if (!goal.is_finite()) {
      fail("precision_required",
           "inverse of a non-constant unit is an infinite series; "
           "a finite working precision is required");
    }
    // 1/(c + t) = (1/c) * sum_k (-t/c)^k, v(t/c) > 0.
    const BasicSeries step = (-tail).scaled(lead_inv).truncated(goal);
    BasicSeries acc = constant(series_traits<C>::one(), goal);
    BasicSeries power = acc;
    while (true) {
      power = (power * step).truncated(goal);
      if (power.is_zero()) break;
      acc = acc + power;
    }
    return acc.scaled(lead_inv);
  }

  // Termwise identity, including the precision tag.
  friend bool operator==(const BasicSeries& a, const BasicSeries& b) {
    if (a.precision_ != b.precision_) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].first != b.terms_[i].first) return false;
      if (!series_traits<C>::is_zero(a.terms_[i].second -
                                     b.terms_[i].second)) {
        return false;
      }
    }
    return true;
  }
  friend bool operator!=(const BasicSeries& a, const BasicSeries& b) {
    return !(a == b);
  }

  // Agreement of the known parts below the coarser precision.
  friend bool agree(const BasicSeries& a, const BasicSeries& b) {
    const Level p = min(a.precision_, b.precision_);
    return a.truncated(p).terms_ == b.truncated(p).terms_;
  }

  // Canonical text: "c", "c*T^(e)" terms joined by " + ", exponents and
  // coefficients as reduced fractions, trailing " + O(T^(p))" when the
  // precision is finite, bare "O(T^(p))" / "0" for zero.
  std::string str() const {
    std::string out;
    for (const Term& t : terms_) {
      if (!out.empty()) out += " + ";
      out += series_traits<C>::str(t.second);
      if (t.first != 0) {
        out += "*T^(" + rat_to_string(t.first) + ")";
      }
    }
    if (precision_.is_finite()) {
      if (!out.empty()) out += " + ";
      out += "O(T^(" + precision_.str() + "))";
    }
    if (out.empty()) out = "0";
    return out;
  }

private:
  void require_nonzero() const {
    if (terms_.empty()) {
      fail("not_a_unit", "leading term of a zero series");
    }
  }

  std::vector<Term> terms_;
  Level precision_;
};

using NovikovScalar = BasicSeries<Rat>;
using NumericSeries = BasicSeries<std::complex<double>>;

// Inverse of the canonical printer; also accepts "-" separators, implicit
// unit coefficients ("T^(1/2)", "-T^(2)") and redundant whitespace.
NovikovScalar parse_series(const std::string& text);

// Forgets the exact coefficients, keeps the exact exponents.
NumericSeries to_numeric(const NovikovScalar& s);

}  // namespace diskpot
