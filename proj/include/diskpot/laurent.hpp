#pragma once

#include <map>
#include <string>
#include <vector>

#include "diskpot/novikov.hpp"

namespace diskpot {

// Integer exponent vector of a Laurent monomial, one slot per variable.
using Monomial = std::vector<int>;

// Sanity bound on exponents accepted from input data.  Internal arithmetic
// (products in property checks and the like) may exceed it.
constexpr int max_ingested_exponent = 64;

// Multivariate Laurent polynomial with T-adic series coefficients.  Stored
// sparsely, keyed by exponent vector; zero coefficients are dropped, but the
// polynomial remembers the coarsest coefficient precision it has ever held,
// so truncation information survives exact cancellation.
template <typename C>
class BasicLaurent {
public:
  using Scalar = BasicSeries<C>;
  using TermMap = std::map<Monomial, Scalar>;

  BasicLaurent() : precision_(Level::infinity()) {}
  explicit BasicLaurent(std::vector<std::string> vars)
      : vars_(std::move(vars)), precision_(Level::infinity()) {}

  const std::vector<std::string>& vars() const { return vars_; }
  int n_vars() const { return static_cast<int>(vars_.size()); }
  int var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Coarsest precision across all coefficients ever stored.
  Level precision() const { return precision_; }

  // Validated entry point for external data.
  void add_term(const Monomial& exponents, const Scalar& coefficient) {
    if (static_cast<int>(exponents.size()) != n_vars()) {
      fail("bad_monomial", "exponent vector has wrong length");
    }
    for (int e : exponents) {
      if (e > max_ingested_exponent || e < -max_ingested_exponent) {
        fail("bad_monomial",
             "Laurent exponent out of range [-64, 64]: " + std::to_string(e));
      }
    }
    accumulate(exponents, coefficient);
  }

  BasicLaurent truncated(Level precision) const {
    BasicLaurent out(vars_);
    out.precision_ = min(precision_, precision);
    for (const auto& [mono, coef] : terms_) {
      out.accumulate(mono, coef.truncated(precision));
    }
    return out;
  }

  // Exact polynomial representative below `level` (see
  // BasicSeries::polynomial_part): coefficient parts at or above the level
  // are dropped without recording a precision mark.
  BasicLaurent polynomial_part(Level level) const {
    BasicLaurent out(vars_);
    out.precision_ = precision_;
    for (const auto& [mono, coef] : terms_) {
      out.accumulate(mono, coef.polynomial_part(level));
    }
    return out;
  }

  // Unchecked insert for polynomials produced by internal arithmetic, where
  // exponents may legitimately exceed the ingestion bound.
  void add_term_unchecked(const Monomial& exponents, const Scalar& coefficient) {
    if (static_cast<int>(exponents.size()) != n_vars()) {
      fail("bad_monomial", "exponent vector has wrong length");
    }
    accumulate(exponents, coefficient);
  }

  friend BasicLaurent operator+(const BasicLaurent& a, const BasicLaurent& b) {
    BasicLaurent out(a.vars_);
    out.precision_ = min(a.precision_, b.precision_);
    out.terms_ = a.terms_;
    for (const auto& [mono, coef] : b.terms_) out.accumulate(mono, coef);
    return out;
  }

  friend BasicLaurent operator-(const BasicLaurent& a) {
    BasicLaurent out(a.vars_);
    out.precision_ = a.precision_;
    for (const auto& [mono, coef] : a.terms_) out.terms_.emplace(mono, -coef);
    return out;
  }

  friend BasicLaurent operator-(const BasicLaurent& a, const BasicLaurent& b) {
    return a + (-b);
  }

  friend BasicLaurent operator*(const BasicLaurent& a, const BasicLaurent& b) {
    BasicLaurent out(a.vars_);
    out.precision_ = min(a.precision_, b.precision_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(ma);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
        out.accumulate(m, ca * cb);
      }
    }
    return out;
  }

  BasicLaurent scaled(const Scalar& factor) const {
    BasicLaurent out(vars_);
    out.precision_ = precision_;
    for (const auto& [mono, coef] : terms_) {
      out.accumulate(mono, coef * factor);
    }
    return out;
  }

  // Multiplication by the monomial z^shift (a unit at unit points); used to
  // clear denominators before residue reduction.
  BasicLaurent monomial_shifted(const Monomial& shift) const {
    BasicLaurent out(vars_);
    out.precision_ = precision_;
    for (const auto& [mono, coef] : terms_) {
      Monomial m(mono);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += shift[i];
      out.terms_.emplace(std::move(m), coef);
    }
    return out;
  }

  // Logarithmic derivative z_i d/dz_i: multiplies each term by its i-th
  // exponent, leaving the monomial untouched.  This is the derivative in
  // which critical-point systems of potential functions are written.
  BasicLaurent log_partial(int i) const {
    check_var(i);
    BasicLaurent out(vars_);
    out.precision_ = precision_;
    for (const auto& [mono, coef] : terms_) {
      if (mono[i] == 0) continue;
      out.terms_.emplace(mono, coef.scaled(C(mono[i])));
    }
    return out;
  }

  // Ordinary derivative d/dz_i (what Newton corrections require).
  BasicLaurent partial(int i) const {
    check_var(i);
    BasicLaurent out(vars_);
    out.precision_ = precision_;
    for (const auto& [mono, coef] : terms_) {
      if (mono[i] == 0) continue;
      Monomial m(mono);
      m[i] -= 1;
      out.accumulate(m, coef.scaled(C(mono[i])));
    }
    return out;
  }

  // Full evaluation.  Coordinates raised to negative powers must be units of
  // the coefficient ring (valuation zero); other coordinates are
  // unconstrained, which is what allows weight variables to take values in
  // the maximal ideal.
  Scalar eval(const std::vector<Scalar>& point) const {
    if (static_cast<int>(point.size()) != n_vars()) {
      fail("invalid_problem", "evaluation point has wrong dimension");
    }
    std::vector<Scalar> inverses = prepare_inverses(point);
    Scalar sum = Scalar::zero(precision_);
    for (const auto& [mono, coef] : terms_) {
      Scalar term = coef;
      for (int i = 0; i < n_vars(); ++i) {
        if (mono[i] > 0) {
          term = term * point[i].pow(static_cast<unsigned>(mono[i]));
        } else if (mono[i] < 0) {
          term = term * inverses[i].pow(static_cast<unsigned>(-mono[i]));
        }
      }
      sum = sum + term;
    }
    return sum;
  }

  // Partial evaluation: substitutes the given coordinates and returns a
  // polynomial in the same variable list (substituted slots become exponent
  // zero everywhere).
  BasicLaurent substituted(const std::map<int, Scalar>& assignment) const {
    for (const auto& [i, value] : assignment) {
      check_var(i);
      (void)value;
    }
    Level target = precision_;
    for (const auto& [i, value] : assignment) {
      (void)i;
      target = min(target, value.precision());
    }
    if (target.is_finite()) {
      Rat drop(0);
      for (const auto& [mono, coef] : terms_) {
        (void)mono;
        const Level v = coef.effective_valuation();
        if (v.is_finite() && v.finite_value() < drop) drop = v.finite_value();
      }
      target = target - drop;
    }
    // Inverses only for the substituted variables that need them.
    BasicLaurent out(vars_);
    out.precision_ = precision_;
    std::vector<Scalar> inverses(vars_.size(), Scalar::zero());
    std::vector<bool> have_inverse(vars_.size(), false);
    for (const auto& [mono, coef] : terms_) {
      Scalar factor = coef;
      Monomial m(mono);
      for (const auto& [i, value] : assignment) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const int e = m[ui];
        if (e == 0) continue;
        m[ui] = 0;
        if (e > 0) {
          factor = factor * value.pow(static_cast<unsigned>(e));
        } else {
          if (!have_inverse[ui]) {
            inverses[ui] = invert_coordinate(value, vars_[ui], target);
            have_inverse[ui] = true;
          }
          factor = factor * inverses[ui].pow(static_cast<unsigned>(-e));
        }
      }
      out.accumulate(m, factor);
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) {
      return precision_.is_finite() ? "O(T^(" + precision_.str() + "))" : "0";
    }
    std::string out;
    for (const auto& [mono, coef] : terms_) {
      if (!out.empty()) out += " + ";
      std::string vars_part;
      for (int i = 0; i < n_vars(); ++i) {
        if (mono[i] == 0) continue;
        if (!vars_part.empty()) vars_part += "*";
        vars_part += vars_[static_cast<std::size_t>(i)];
        if (mono[i] != 1) vars_part += "^" + std::to_string(mono[i]);
      }
      const bool bare_constant = coef.terms().size() == 1 &&
                                 coef.terms().front().first == 0 &&
                                 !coef.precision().is_finite();
      std::string coef_part =
          bare_constant ? series_traits<C>::str(coef.terms().front().second)
                        : "(" + coef.str() + ")";
      if (vars_part.empty()) {
        out += coef_part;
      } else if (bare_constant &&
                 series_traits<C>::is_zero(coef.terms().front().second -
                                           series_traits<C>::one())) {
        out += vars_part;
      } else {
        out += coef_part + "*" + vars_part;
      }
    }
    return out;
  }

private:
  void check_var(int i) const {
    if (i < 0 || i >= n_vars()) {
      fail("invalid_problem", "variable index out of range");
    }
  }

  void accumulate(const Monomial& mono, const Scalar& coefficient) {
    precision_ = min(precision_, coefficient.precision());
    if (coefficient.is_zero()) {
      return;
    }
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
      terms_.emplace(mono, coefficient);
      return;
    }
    it->second = it->second + coefficient;
    if (it->second.is_zero()) {
      precision_ = min(precision_, it->second.precision());
      terms_.erase(it);
    }
  }

  // Working precision for coordinate inverses: the coarsest level relevant
  // to this polynomial, widened when coefficients dip below valuation zero.
  Level inverse_target(const std::vector<Scalar>& point) const {
    Level target = precision_;
    for (const Scalar& x : point) target = min(target, x.precision());
    if (!target.is_finite()) return target;
    Rat drop(0);
    for (const auto& [mono, coef] : terms_) {
      const Level v = coef.effective_valuation();
      if (v.is_finite() && v.finite_value() < drop) drop = v.finite_value();
    }
    return target - drop;
  }

  static Scalar invert_coordinate(const Scalar& value, const std::string& name,
                                  Level target = Level::infinity()) {
    if (!value.is_unit()) {
      fail("not_a_unit", "coordinate '" + name +
                             "' is raised to a negative power but is not a "
                             "unit of the valuation ring");
    }
    return value.invert_unit(target);
  }

  std::vector<Scalar> prepare_inverses(const std::vector<Scalar>& point) const {
    std::vector<bool> needed(vars_.size(), false);
    for (const auto& [mono, coef] : terms_) {
      for (std::size_t i = 0; i < needed.size(); ++i) {
        if (mono[i] < 0) needed[i] = true;
      }
    }
    const Level target = inverse_target(point);
    std::vector<Scalar> inverses(vars_.size(), Scalar::zero());
    for (std::size_t i = 0; i < needed.size(); ++i) {
      if (needed[i]) {
        inverses[i] = invert_coordinate(point[i], vars_[i], target);
      }
    }
    return inverses;
  }

  std::vector<std::string> vars_;
  TermMap terms_;
  Level precision_;
};

using LaurentPoly = BasicLaurent<Rat>;
using NumericLaurent = BasicLaurent<std::complex<double>>;

NumericLaurent to_numeric(const LaurentPoly& p);

// Values of the logarithmic gradient (z_i d/dz_i applied to p, evaluated at
// the point) over the requested variables, with the minimal raw valuation
// across entries: +inf when every entry vanishes identically within its
// precision.
template <typename C>
struct GradientValues {
  std::vector<BasicSeries<C>> entries;
  Level min_valuation;
};

template <typename C>
GradientValues<C> log_gradient(const BasicLaurent<C>& p,
                               const std::vector<BasicSeries<C>>& point,
                               const std::vector<int>& indices) {
  GradientValues<C> g;
  g.min_valuation = Level::infinity();
  for (int i : indices) {
    BasicSeries<C> value = p.log_partial(i).eval(point);
    g.min_valuation = min(g.min_valuation, value.valuation());
    g.entries.push_back(std::move(value));
  }
  return g;
}

// Ordinary Jacobian d F_i / d z_j of a system, evaluated at a point,
// restricted to the chosen columns.
template <typename C>
std::vector<std::vector<BasicSeries<C>>> jacobian(
    const std::vector<BasicLaurent<C>>& system,
    const std::vector<BasicSeries<C>>& point,
    const std::vector<int>& active) {
  std::vector<std::vector<BasicSeries<C>>> rows;
  rows.reserve(system.size());
  for (const BasicLaurent<C>& f : system) {
    std::vector<BasicSeries<C>> row;
    row.reserve(active.size());
    for (int j : active) {
      row.push_back(f.partial(j).eval(point));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Inverse of BasicLaurent::str for exact coefficients.  Factors are
// rationals, parenthesized series, bare "T^(e)" powers, and "var[^k]" items
// joined by '*'; summands are joined by '+'/'-'.
LaurentPoly parse_laurent(const std::string& text,
                          const std::vector<std::string>& vars);

}  // namespace diskpot
