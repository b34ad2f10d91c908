#include "diskpot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "diskpot/errors.hpp"
#include "diskpot/linalg.hpp"

namespace diskpot {

namespace {

template <typename C>
C int_power(const C& base, int e) {
  C acc(1);
  for (int k = 0; k < e; ++k) acc = acc * base;
  return acc;
}

template <typename C>
C from_rat(const Rat& c) {
  if constexpr (std::is_same_v<C, Rat>) {
    return c;
  } else {
    return C(rat_to_double(c));
  }
}

template <typename C>
C eval_terms(const std::map<Monomial, Rat>& terms, const std::vector<C>& pt) {
  C acc(0);
  for (const auto& [mono, c] : terms) {
    C t = from_rat<C>(c);
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] != 0) t = t * int_power(pt[i], mono[i]);
    }
    acc = acc + t;
  }
  return acc;
}

}  // namespace

Rat ResiduePoly::eval(const std::vector<Rat>& point) const {
  return eval_terms<Rat>(terms, point);
}

std::complex<double> ResiduePoly::eval(
    const std::vector<std::complex<double>>& point) const {
  return eval_terms<std::complex<double>>(terms, point);
}

ResiduePoly ResiduePoly::partial(int var) const {
  ResiduePoly out;
  for (const auto& [mono, c] : terms) {
    const int e = mono[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial m(mono);
    m[static_cast<std::size_t>(var)] -= 1;
    out.terms.emplace(std::move(m), c * e);
  }
  return out;
}

PreparedSystem prepare(const CriticalProblem& problem,
                       const SolverOptions& options) {
  const PotentialFunction& pf = problem.potential;
  PreparedSystem prep;
  prep.all_vars = pf.poly.vars();
  prep.torus_count = static_cast<int>(pf.torus_vars.size());
  prep.e_max = pf.energies.precision;
  const std::size_t all_n = prep.all_vars.size();

  bool multi_term_fixed = false;
  std::map<int, NovikovScalar> sub;
  for (const auto& [name, value] : problem.fixed) {
    const int idx = pf.poly.var_index(name);
    if (idx < 0) {
      fail("invalid_problem", "cannot fix unknown variable '" + name + "'");
    }
    if (idx >= prep.torus_count) {
      fail("invalid_problem",
           "only torus variables can be fixed; '" + name +
               "' is a weight variable");
    }
    if (!value.is_unit()) {
      fail("not_a_unit",
           "fixed value for '" + name + "' must be a unit (valuation 0)");
    }
    if (value.terms().size() > 1) multi_term_fixed = true;
    sub.emplace(idx, value);
    prep.fixed_values.emplace(idx, value);
  }
  for (std::size_t i = 0; i < all_n; ++i) {
    if (sub.count(static_cast<int>(i))) continue;
    prep.active.push_back(static_cast<int>(i));
    prep.active_is_weight.push_back(static_cast<int>(i) >= prep.torus_count);
  }
  if (prep.active.empty()) {
    fail("invalid_problem", "every variable is fixed; nothing to solve for");
  }

  // Substituting a genuine series for an inverted variable needs a finite
  // working precision; constants invert exactly.
  LaurentPoly base = pf.poly;
  if (multi_term_fixed && prep.e_max.is_finite()) {
    base = base.truncated(prep.e_max);
  }

  for (int i = 0; i < prep.torus_count; ++i) {
    LaurentPoly eq = base.log_partial(i);
    if (!sub.empty()) eq = eq.substituted(sub);
    if (eq.is_zero()) {
      // This gradient direction is identically zero (or zero within its
      // precision, which then caps what any lift can certify).
      if (eq.precision().is_finite()) {
        prep.dropped_equation_cap =
            min(prep.dropped_equation_cap, eq.precision());
      }
      continue;
    }
    ClearedEquation ce;
    ce.source_var = prep.all_vars[static_cast<std::size_t>(i)];
    ce.clearing.assign(all_n, 0);
    for (const auto& [mono, coef] : eq.terms()) {
      (void)coef;
      for (std::size_t j = 0; j < all_n; ++j) {
        ce.clearing[j] = std::max(ce.clearing[j], -mono[j]);
      }
    }
    LaurentPoly cleared_raw = eq.monomial_shifted(ce.clearing);
    Level g = Level::infinity();
    for (const auto& [mono, coef] : cleared_raw.terms()) {
      (void)mono;
      g = min(g, coef.valuation());
    }
    ce.gamma = g.finite_value();
    ce.cleared = cleared_raw.scaled(NovikovScalar::t_power(-ce.gamma));
    LaurentPoly residue_poly(prep.all_vars);
    for (const auto& [mono, coef] : ce.cleared.terms()) {
      const Rat c0 = coef.coefficient_at(Rat(0));
      if (c0 == 0) continue;
      ce.residue.terms.emplace(mono, c0);
      residue_poly.add_term_unchecked(mono, NovikovScalar::constant(c0));
    }
    ce.higher = ce.cleared - residue_poly;
    prep.equations.push_back(std::move(ce));
  }
  if (prep.equations.empty()) {
    fail("invalid_problem", "the critical system is identically zero");
  }
  if (!options.per_equation_rescale) {
    for (const ClearedEquation& ce : prep.equations) {
      if (ce.gamma != prep.equations.front().gamma) {
        fail("inhomogeneous_valuations",
             "equations have different minimal valuations (" +
                 rat_to_string(prep.equations.front().gamma) + " vs " +
                 rat_to_string(ce.gamma) +
                 "); enable per-equation rescaling to proceed");
      }
    }
  }
  prep.gamma_max = prep.equations.front().gamma;
  prep.gamma_min = prep.equations.front().gamma;
  for (const ClearedEquation& ce : prep.equations) {
    prep.gamma_max = std::max(prep.gamma_max, ce.gamma);
    prep.gamma_min = std::min(prep.gamma_min, ce.gamma);
  }

  // Every residual valuation the lift can meet lies in the monoid generated
  // by the positive coefficient exponents of the cleared system.
  if (prep.e_max.is_finite()) {
    std::set<Rat> gens;
    for (const ClearedEquation& ce : prep.equations) {
      for (const auto& [mono, coef] : ce.cleared.terms()) {
        (void)mono;
        for (const auto& [exp, c] : coef.terms()) {
          (void)c;
          if (exp > 0) gens.insert(exp);
        }
      }
    }
    const Rat bound = prep.e_max.finite_value() - prep.gamma_min;
    std::set<Rat> reach;
    std::vector<Rat> work;
    reach.insert(Rat(0));
    work.push_back(Rat(0));
    while (!work.empty()) {
      const Rat v = work.back();
      work.pop_back();
      for (const Rat& g : gens) {
        const Rat nv = v + g;
        if (nv > bound) continue;
        if (reach.insert(nv).second) {
          if (reach.size() > 200000) {
            fail("invalid_problem",
                 "exponent grid below the precision is too large");
          }
          work.push_back(nv);
        }
      }
    }
    for (const Rat& r : reach) {
      if (r > 0) prep.grid.push_back(r);
    }
  }
  return prep;
}

namespace {

template <typename C>
std::vector<C> full_point(const PreparedSystem& prep,
                          const std::vector<C>& active_values) {
  std::vector<C> full(prep.all_vars.size(), C(0));
  for (std::size_t j = 0; j < prep.active.size(); ++j) {
    full[static_cast<std::size_t>(prep.active[j])] = active_values[j];
  }
  return full;
}

template <typename C>
std::vector<std::vector<C>> residue_jacobian(const PreparedSystem& prep,
                                             const std::vector<C>& active_values) {
  const std::vector<C> full = full_point(prep, active_values);
  std::vector<std::vector<C>> rows;
  rows.reserve(prep.equations.size());
  for (const ClearedEquation& ce : prep.equations) {
    std::vector<C> row;
    row.reserve(prep.active.size());
    for (int j : prep.active) {
      row.push_back(ce.residue.partial(j).eval(full));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LeadingSolution> solve_leading_exact(const PreparedSystem& prep,
                                                 const SolverOptions& options) {
  const std::size_t n = prep.active.size();
  std::vector<std::vector<Rat>> candidates;
  {
    std::vector<std::vector<Rat>> axis(n);
    for (std::size_t j = 0; j < n; ++j) {
      axis[j] = prep.active_is_weight[j] ? std::vector<Rat>{Rat(0)}
                                         : std::vector<Rat>{Rat(1), Rat(-1)};
    }
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<Rat> cand(n);
      for (std::size_t j = 0; j < n; ++j) cand[j] = axis[j][idx[j]];
      candidates.push_back(std::move(cand));
      std::size_t j = 0;
      while (j < n && ++idx[j] == axis[j].size()) {
        idx[j] = 0;
        ++j;
      }
      if (j == n) break;
    }
  }
  for (const auto& user : options.exact_candidates) {
    if (user.size() != n) {
      fail("invalid_problem",
           "candidate has " + std::to_string(user.size()) + " coordinates; " +
               std::to_string(n) + " unknowns");
    }
    candidates.push_back(user);
  }

  std::set<std::vector<Rat>> seen;
  std::vector<LeadingSolution> out;
  for (const auto& cand : candidates) {
    if (!seen.insert(cand).second) continue;
    const std::vector<Rat> full = full_point(prep, cand);
    bool solves = true;
    for (const ClearedEquation& ce : prep.equations) {
      if (ce.residue.eval(full) != 0) {
        solves = false;
        break;
      }
    }
    if (!solves) continue;
    LeadingSolution s;
    s.exact = true;
    s.point = cand;
    RatMatrix jac = residue_jacobian(prep, cand);
    if (prep.is_square()) {
      s.jacobian_det = determinant(jac);
      s.nondegenerate = s.jacobian_det != 0;
      s.nullity = s.nondegenerate
                      ? 0
                      : static_cast<int>(n - rank(std::move(jac), n));
    } else {
      s.nondegenerate = false;
      s.nullity = static_cast<int>(n - rank(std::move(jac), n));
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const LeadingSolution& a, const LeadingSolution& b) {
              return a.point < b.point;
            });
  if (out.empty()) {
    fail("no_solution_found",
         "no leading-order solution among the candidate set (this is not a "
         "proof of nonexistence; try numeric mode or supply candidates)");
  }
  return out;
}

std::vector<LeadingSolution> solve_leading_numeric(
    const PreparedSystem& prep, const SolverOptions& options) {
  using Cx = std::complex<double>;
  if (!prep.is_square()) {
    fail("invalid_problem",
         "numeric exploration needs as many equations as unknowns; fix "
         "variables to square the system");
  }
  const std::size_t n = prep.active.size();
  std::vector<std::vector<ResiduePoly>> partials;
  for (const ClearedEquation& ce : prep.equations) {
    std::vector<ResiduePoly> row;
    for (int j : prep.active) row.push_back(ce.residue.partial(j));
    partials.push_back(std::move(row));
  }
  auto evaluate = [&](const std::vector<Cx>& x, std::vector<Cx>& f) {
    const std::vector<Cx> full = full_point(prep, x);
    f.resize(prep.equations.size());
    for (std::size_t i = 0; i < prep.equations.size(); ++i) {
      f[i] = prep.equations[i].residue.eval(full);
    }
  };
  auto jacobian_at = [&](const std::vector<Cx>& x) {
    const std::vector<Cx> full = full_point(prep, x);
    CxMatrix jac(prep.equations.size());
    for (std::size_t i = 0; i < prep.equations.size(); ++i) {
      jac[i].resize(n);
      for (std::size_t j = 0; j < n; ++j) jac[i][j] = partials[i][j].eval(full);
    }
    return jac;
  };
  auto sup_norm = [](const std::vector<Cx>& v) {
    double m = 0;
    for (const Cx& c : v) m = std::max(m, std::abs(c));
    return m;
  };

  std::mt19937 rng(options.rng_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto random_seed = [&] {
    std::vector<Cx> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (prep.active_is_weight[j]) {
        x[j] = Cx(uni(rng) - 0.5, uni(rng) - 0.5);
      } else {
        const double radius = 0.5 + 1.5 * uni(rng);
        const double angle = 2.0 * 3.14159265358979323846 * uni(rng);
        x[j] = std::polar(radius, angle);
      }
    }
    return x;
  };

  std::vector<LeadingSolution> out;
  auto try_seed = [&](std::vector<Cx> x) {
    std::vector<Cx> f;
    bool converged = false;
    for (int it = 0; it < options.max_newton_iterations; ++it) {
      evaluate(x, f);
      if (sup_norm(f) < options.newton_tolerance) {
        converged = true;
        break;
      }
      auto delta = solve_square(jacobian_at(x), f);
      if (!delta) return;
      for (std::size_t j = 0; j < n; ++j) x[j] -= (*delta)[j];
    }
    if (!converged) return;
    // Polish to machine precision so series arithmetic downstream sees
    // genuinely-zero constant coefficients.
    for (int extra = 0; extra < 5; ++extra) {
      evaluate(x, f);
      if (sup_norm(f) <= 1e-13) break;
      auto delta = solve_square(jacobian_at(x), f);
      if (!delta) break;
      for (std::size_t j = 0; j < n; ++j) x[j] -= (*delta)[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (prep.active_is_weight[j]) continue;
      const double mag = std::abs(x[j]);
      if (mag < options.unit_floor || mag > 1.0 / options.unit_floor) {
        return;  // boundary escape, not a torus point
      }
    }
    // A root of the cleared system only solves the original log-gradient
    // system after dividing the clearing monomial back out.  Newton can
    // converge into the monomial's zero locus (coordinates running off to 0
    // or infinity); there the cleared residual is tiny while the original
    // one is not, so measure it in original units.
    evaluate(x, f);
    {
      const std::vector<Cx> full = full_point(prep, x);
      for (std::size_t i = 0; i < prep.equations.size(); ++i) {
        double scale = 1.0;
        const Monomial& m = prep.equations[i].clearing;
        for (std::size_t k = 0; k < m.size(); ++k) {
          for (int e = 0; e < m[k]; ++e) scale *= std::abs(full[k]);
        }
        if (std::abs(f[i]) > options.newton_tolerance * scale) return;
      }
    }
    for (const LeadingSolution& s : out) {
      double dist = 0;
      for (std::size_t j = 0; j < n; ++j) {
        dist = std::max(dist, std::abs(s.numeric_point[j] - x[j]));
      }
      if (dist < options.dedup_tolerance) return;
    }
    LeadingSolution s;
    s.exact = false;
    s.numeric_point = x;
    s.numeric_jacobian_det = determinant(jacobian_at(x));
    s.nondegenerate = std::abs(s.numeric_jacobian_det) > 1e-8;
    s.nullity = s.nondegenerate ? 0 : -1;
    out.push_back(std::move(s));
  };

  for (const auto& user : options.numeric_seeds) {
    if (user.size() != n) {
      fail("invalid_problem",
           "seed has " + std::to_string(user.size()) + " coordinates; " +
               std::to_string(n) + " unknowns");
    }
    try_seed(user);
  }
  for (int k = 0; k < options.seed_count; ++k) try_seed(random_seed());

  std::sort(out.begin(), out.end(),
            [](const LeadingSolution& a, const LeadingSolution& b) {
              for (std::size_t j = 0; j < a.numeric_point.size(); ++j) {
                const Cx u = a.numeric_point[j];
                const Cx v = b.numeric_point[j];
                if (std::abs(u.real() - v.real()) > 1e-9) {
                  return u.real() < v.real();
                }
                if (std::abs(u.imag() - v.imag()) > 1e-9) {
                  return u.imag() < v.imag();
                }
              }
              return false;
            });
  if (out.empty()) {
    fail("no_solution_found",
         "numeric search found no critical point (this is not a proof of "
         "nonexistence; try more seeds or a different RNG seed)");
  }
  return out;
}

template <typename C>
struct lift_field {};

template <>
struct lift_field<Rat> {
  static std::optional<std::vector<Rat>> solve(
      const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b) {
    return solve_square(a, b);
  }
  static BasicSeries<Rat> convert(const NovikovScalar& s) { return s; }
  static BasicLaurent<Rat> convert(const LaurentPoly& p) { return p; }
};

template <>
struct lift_field<std::complex<double>> {
  static std::optional<std::vector<std::complex<double>>> solve(
      const std::vector<std::vector<std::complex<double>>>& a,
      const std::vector<std::complex<double>>& b) {
    return solve_square(a, b);
  }
  static NumericSeries convert(const NovikovScalar& s) {
    return to_numeric(s);
  }
  static NumericLaurent convert(const LaurentPoly& p) { return to_numeric(p); }
};

template <typename C>
struct LiftWork {
  std::vector<BasicSeries<C>> coords;  // active order, untruncated
  Level residual = Level::infinity();
  Level first_correction = Level::infinity();
  int iterations = 0;
};

template <typename C>
LiftWork<C> run_lift(const PreparedSystem& prep, const std::vector<C>& leading,
                     const SolverOptions& options) {
  (void)options;
  using Field = lift_field<C>;
  const std::size_t n = prep.active.size();
  const std::vector<std::vector<C>> j0 = residue_jacobian(prep, leading);

  std::vector<BasicLaurent<C>> cleared;
  cleared.reserve(prep.equations.size());
  for (const ClearedEquation& ce : prep.equations) {
    cleared.push_back(Field::convert(ce.cleared));
  }
  std::vector<BasicSeries<C>> assignment(prep.all_vars.size(),
                                         BasicSeries<C>::zero());
  for (const auto& [slot, value] : prep.fixed_values) {
    assignment[static_cast<std::size_t>(slot)] = Field::convert(value);
  }
  for (std::size_t j = 0; j < n; ++j) {
    assignment[static_cast<std::size_t>(prep.active[j])] =
        BasicSeries<C>::constant(leading[j]);
  }

  LiftWork<C> work;
  const long cap = 10 * std::max<long>(1, static_cast<long>(prep.grid.size()));
  std::optional<Rat> prev_s;
  std::vector<BasicSeries<C>> residuals(prep.equations.size());
  while (true) {
    Level worst = Level::infinity();
    Level min_raw = Level::infinity();
    for (std::size_t i = 0; i < prep.equations.size(); ++i) {
      residuals[i] = cleared[i].eval(assignment);
      worst = min(worst, residuals[i].effective_valuation() +
                             Level(prep.equations[i].gamma));
      min_raw = min(min_raw, residuals[i].valuation());
    }
    if (worst >= prep.e_max) break;
    if (!prep.e_max.is_finite()) {
      fail("precision_required",
           "the residual is not exactly zero and no finite precision is "
           "declared; lifting beyond the declared terms is undefined");
    }
    if (!min_raw.is_finite()) {
      fail("precision_exhausted",
           "the residual is zero within its precision " + worst.str() +
               " but that precision is below the certification target " +
               prep.e_max.str());
    }
    const Rat s = min_raw.finite_value();
    if (prev_s && s <= *prev_s) {
      fail("invalid_problem",
           "internal: residual valuation did not increase during lifting");
    }
    if (!std::binary_search(prep.grid.begin(), prep.grid.end(), s)) {
      fail("invalid_problem",
           "residual valuation " + rat_to_string(s) +
               " lies outside the exponent grid; the leading solution is not "
               "accurate enough to lift");
    }
    std::vector<C> rhs(prep.equations.size(), C(0));
    for (std::size_t i = 0; i < prep.equations.size(); ++i) {
      rhs[i] = C(0) - residuals[i].coefficient_at(s);
    }
    auto delta = Field::solve(j0, rhs);
    if (!delta) {
      fail("degenerate_jacobian",
           "the leading Jacobian is singular; lift refused");
    }
    for (std::size_t j = 0; j < n; ++j) {
      assignment[static_cast<std::size_t>(prep.active[j])] =
          assignment[static_cast<std::size_t>(prep.active[j])] +
          BasicSeries<C>::term((*delta)[j], s);
    }
    ++work.iterations;
    if (work.iterations == 1) work.first_correction = Level(s);
    prev_s = s;
    if (work.iterations > cap) {
      fail("invalid_problem", "lift iteration cap exceeded");
    }
  }

  Level reported = prep.dropped_equation_cap;
  for (std::size_t i = 0; i < prep.equations.size(); ++i) {
    reported = min(reported, residuals[i].effective_valuation() +
                                 Level(prep.equations[i].gamma));
  }
  work.residual = reported;
  work.coords.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    work.coords.push_back(
        assignment[static_cast<std::size_t>(prep.active[j])]);
  }
  return work;
}

}  // namespace

LiftedPoint newton_lift(const PreparedSystem& prep,
                        const LeadingSolution& leading,
                        const SolverOptions& options) {
  if (!prep.is_square()) {
    fail("invalid_problem",
         "lifting requires a square system; fix variables so the unknowns "
         "match the equations");
  }
  if (!leading.nondegenerate) {
    fail("degenerate_jacobian",
         "the leading solution has a degenerate Jacobian; lift refused");
  }
  if (prep.dropped_equation_cap < prep.e_max) {
    fail("precision_exhausted",
         "a gradient equation is known only modulo " +
             prep.dropped_equation_cap.str() +
             ", below the certification target " + prep.e_max.str());
  }
  const Level coord_precision = prep.coordinate_precision();
  LiftedPoint out;
  if (leading.exact) {
    LiftWork<Rat> work = run_lift<Rat>(prep, leading.point, options);
    out.exact = true;
    out.certified = true;
    out.residual_valuation = work.residual;
    out.first_correction = work.first_correction;
    out.iterations = work.iterations;
    for (std::size_t j = 0; j < prep.active.size(); ++j) {
      out.assignment.emplace_back(
          prep.all_vars[static_cast<std::size_t>(prep.active[j])],
          work.coords[j].truncated(coord_precision));
    }
  } else {
    LiftWork<std::complex<double>> work =
        run_lift<std::complex<double>>(prep, leading.numeric_point, options);
    out.exact = false;
    out.certified = false;
    out.residual_valuation = work.residual;
    out.first_correction = work.first_correction;
    out.iterations = work.iterations;
    for (std::size_t j = 0; j < prep.active.size(); ++j) {
      out.numeric_assignment.emplace_back(
          prep.all_vars[static_cast<std::size_t>(prep.active[j])],
          work.coords[j].truncated(coord_precision));
    }
  }
  return out;
}

std::vector<LeadingSolution> solve_leading(const PreparedSystem& prep,
                                           const SolverOptions& options) {
  if (options.mode == SolveMode::exact) {
    return solve_leading_exact(prep, options);
  }
  return solve_leading_numeric(prep, options);
}

Classification classify_point(const PotentialFunction& pf,
                              const std::vector<NovikovScalar>& point) {
  if (point.size() != pf.poly.vars().size()) {
    fail("invalid_problem", "classification point has wrong dimension");
  }
  Level grad_min = Level::infinity();
  for (std::size_t i = 0; i < pf.torus_vars.size(); ++i) {
    const NovikovScalar value =
        pf.poly.log_partial(static_cast<int>(i)).eval(point);
    grad_min = min(grad_min, value.effective_valuation());
  }
  Classification c;
  c.criticality_order = min(grad_min, pf.energies.precision);
  if (pf.energies.e5) {
    c.meets_e5 = c.criticality_order >= Level(*pf.energies.e5);
    c.meets_2e =
        c.criticality_order >= Level(2 * (*pf.energies.e5 - pf.energies.e1));
  }
  for (std::size_t i = pf.torus_vars.size(); i < point.size(); ++i) {
    c.weight_valuations.emplace_back(pf.poly.vars()[i],
                                     point[i].effective_valuation());
  }
  return c;
}

}  // namespace diskpot
