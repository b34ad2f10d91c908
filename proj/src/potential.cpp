#include "diskpot/potential.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "diskpot/errors.hpp"

namespace diskpot {

int PotentialSpec::local_count() const {
  const int nf = static_cast<int>(polytope.facets().size());
  if (local_facet_count < 0) return nf;
  if (local_facet_count < 1 || local_facet_count > nf) {
    fail("invalid_problem", "local facet count out of range");
  }
  return local_facet_count;
}

std::vector<std::string> PotentialSpec::torus_variables() const {
  const std::size_t dim = static_cast<std::size_t>(polytope.dim());
  if (!variables.empty()) {
    if (variables.size() != dim) {
      fail("invalid_problem", "variable list has wrong length");
    }
    std::set<std::string> seen;
    for (const std::string& v : variables) {
      if (v.empty() || !seen.insert(v).second) {
        fail("invalid_problem", "variable names must be nonempty and distinct");
      }
    }
    return variables;
  }
  static const char* defaults[] = {"x", "y", "z", "u"};
  if (dim > 4) {
    fail("invalid_problem",
         "default variable names cover dimension <= 4; name them explicitly");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dim; ++i) out.emplace_back(defaults[i]);
  return out;
}

Rat Energies::e() const {
  if (!e5) {
    fail("invalid_thresholds",
         "this operation needs a declared E5 threshold");
  }
  return *e5 - e1;
}

PotentialFunction build_potential(const PotentialSpec& spec) {
  const auto& p = spec.polytope;
  if (static_cast<int>(spec.basepoint.size()) != p.dim()) {
    fail("invalid_problem", "basepoint has wrong dimension");
  }
  const int local = spec.local_count();
  const std::vector<Rat> distances = p.facet_distances(spec.basepoint);
  for (int i = 0; i < static_cast<int>(distances.size()); ++i) {
    if (distances[static_cast<std::size_t>(i)] > 0) continue;
    if (i < local) {
      fail("basepoint_on_facet",
           "basepoint does not lie strictly inside facet '" +
               p.facets()[static_cast<std::size_t>(i)].label +
               "': the fiber degenerates there");
    }
    fail("basepoint_excluded",
         "basepoint violates the compactifying facet '" +
             p.facets()[static_cast<std::size_t>(i)].label + "'");
  }

  Energies en;
  en.e1 = distances[0];
  for (int i = 1; i < local; ++i) {
    en.e1 = std::min(en.e1, distances[static_cast<std::size_t>(i)]);
  }
  en.e5 = spec.e5;
  en.ecut = spec.ecut;

  if (en.e5 && *en.e5 <= en.e1) {
    fail("invalid_thresholds", "E5 must exceed E1 = " + rat_to_string(en.e1));
  }
  if (spec.assert_wide_gap) {
    if (!en.e5 || *en.e5 <= 3 * en.e1) {
      fail("invalid_thresholds",
           "asserted threshold gap E5 > 3*E1 does not hold");
    }
  }
  if (!spec.outside_terms.empty()) {
    if (!en.e5) {
      fail("invalid_thresholds", "outside terms require a declared E5");
    }
    if (en.ecut && (*en.e5 < *en.ecut || *en.ecut <= en.e1)) {
      fail("invalid_thresholds",
           "declared thresholds must satisfy E5 >= E_cut > E1");
    }
    for (const OutsideTerm& t : spec.outside_terms) {
      if (t.energy < *en.e5) {
        fail("invalid_thresholds",
             "outside term energy " + rat_to_string(t.energy) +
                 " is below the declared E5");
      }
      if (!t.coefficient.is_unit()) {
        fail("invalid_thresholds",
             "outside term coefficient must be a unit so the term's "
             "valuation equals its declared energy");
      }
    }
  }
  if (!spec.bulk.empty() && !en.e5) {
    fail("invalid_thresholds",
         "bulk decoration requires a declared E5 to gate weight valuations");
  }

  en.precision = en.e5 ? Level(2 * (*en.e5 - en.e1)) : Level::infinity();
  if (spec.precision_override) {
    const Level wanted(*spec.precision_override);
    if (en.precision < wanted) {
      fail("invalid_thresholds",
           "precision can only be tightened below the default " +
               en.precision.str());
    }
    en.precision = wanted;
  }
  if (en.precision <= Level(en.e1)) {
    fail("precision_too_low",
         "precision " + en.precision.str() +
             " keeps no term: every disk energy is at least E1 = " +
             rat_to_string(en.e1));
  }

  PotentialFunction pf;
  pf.torus_vars = spec.torus_variables();
  pf.energies = en;
  LaurentPoly poly(pf.torus_vars);
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    const Facet& f = p.facets()[i];
    Monomial mono;
    for (long long c : f.normal) mono.push_back(static_cast<int>(c));
    poly.add_term(mono, NovikovScalar::t_power(distances[i]));
    pf.facet_terms.push_back(
        {f.label, mono, distances[i], static_cast<int>(i) < local});
  }
  for (const OutsideTerm& t : spec.outside_terms) {
    poly.add_term(t.monomial, t.coefficient.shifted(t.energy));
  }
  // Working modulo T^precision means picking the polynomial representative:
  // contributions at or above the precision are dropped, while the kept
  // coefficients stay exact.  The precision itself lives in the energies.
  pf.poly = poly.polynomial_part(en.precision);
  return pf;
}

namespace {

std::string fresh_weight_name(const PotentialFunction& pf,
                              const std::vector<std::string>& pending,
                              bool lone_symbolic) {
  auto taken = [&](const std::string& name) {
    for (const auto& v : pf.torus_vars) {
      if (v == name) return true;
    }
    for (const auto& v : pf.weight_vars) {
      if (v == name) return true;
    }
    for (const auto& v : pending) {
      if (v == name) return true;
    }
    return false;
  };
  if (lone_symbolic && !taken("w")) return "w";
  for (int k = 1;; ++k) {
    const std::string name = "w" + std::to_string(k);
    if (!taken(name)) return name;
  }
}

}  // namespace

PotentialFunction apply_bulk(const PotentialFunction& pf,
                             const PotentialSpec& spec) {
  if (spec.bulk.empty()) return pf;
  const Rat floor = pf.energies.e();

  // Per-facet decoration lists, in declaration order.
  struct Decoration {
    std::optional<NovikovScalar> weight;  // nullopt: symbolic
    std::string var_name;                 // filled for symbolic entries
  };
  std::map<std::string, std::vector<Decoration>> per_facet;
  std::vector<std::string> order;  // decorated facet labels, first-seen order
  std::vector<std::string> new_weight_names;
  int symbolic_total = 0;
  for (const BulkEntry& e : spec.bulk) {
    if (!e.weight) ++symbolic_total;
  }
  const bool lone =
      symbolic_total == 1 && pf.weight_vars.empty();
  for (const BulkEntry& e : spec.bulk) {
    const FacetTerm* term = nullptr;
    for (const FacetTerm& ft : pf.facet_terms) {
      if (ft.label == e.facet_label) term = &ft;
    }
    if (term == nullptr || !term->local) {
      fail("bulk_facet_unknown",
           "bulk decorations may only sit on local facets; '" +
               e.facet_label + "' is not one");
    }
    Decoration d;
    if (e.weight) {
      const Level v = e.weight->effective_valuation();
      if (!e.weight->in_lambda_plus()) {
        fail("weight_too_small",
             "bulk weight on '" + e.facet_label +
                 "' must lie in the maximal ideal");
      }
      if (v < Level(floor)) {
        fail("weight_too_small",
             "bulk weight on '" + e.facet_label + "' has valuation below E = " +
                 rat_to_string(floor));
      }
      d.weight = *e.weight;
    } else {
      d.var_name = fresh_weight_name(pf, new_weight_names, lone);
      new_weight_names.push_back(d.var_name);
    }
    if (per_facet.find(e.facet_label) == per_facet.end()) {
      order.push_back(e.facet_label);
    }
    per_facet[e.facet_label].push_back(std::move(d));
  }

  PotentialFunction out;
  out.torus_vars = pf.torus_vars;
  out.weight_vars = pf.weight_vars;
  for (const std::string& name : new_weight_names) {
    out.weight_vars.push_back(name);
  }
  out.energies = pf.energies;
  out.facet_terms = pf.facet_terms;

  std::vector<std::string> all_vars = out.torus_vars;
  all_vars.insert(all_vars.end(), out.weight_vars.begin(),
                  out.weight_vars.end());
  LaurentPoly poly(all_vars);
  const std::size_t old_n = pf.poly.vars().size();
  for (const auto& [mono, coef] : pf.poly.terms()) {
    Monomial m(mono);
    m.resize(all_vars.size(), 0);
    poly.add_term(m, coef);
  }
  poly = poly + LaurentPoly(all_vars).truncated(pf.poly.precision());
  (void)old_n;

  for (const std::string& label : order) {
    const FacetTerm* term = nullptr;
    for (const FacetTerm& ft : pf.facet_terms) {
      if (ft.label == label) term = &ft;
    }
    // factor - 1 where factor = prod (1 + w_j) over the facet's decorations
    LaurentPoly correction(all_vars);
    correction.add_term(Monomial(all_vars.size(), 0),
                        NovikovScalar::constant(Rat(1)));
    for (const Decoration& d : per_facet[label]) {
      LaurentPoly one_plus_w(all_vars);
      one_plus_w.add_term(Monomial(all_vars.size(), 0),
                          NovikovScalar::constant(Rat(1)));
      Monomial wm(all_vars.size(), 0);
      if (d.weight) {
        one_plus_w.add_term(wm, *d.weight);
      } else {
        int wi = -1;
        for (std::size_t i = 0; i < all_vars.size(); ++i) {
          if (all_vars[i] == d.var_name) wi = static_cast<int>(i);
        }
        wm[static_cast<std::size_t>(wi)] = 1;
        one_plus_w.add_term(wm, NovikovScalar::constant(Rat(1)));
      }
      correction = correction * one_plus_w;
    }
    Monomial minus_one(all_vars.size(), 0);
    correction.add_term(minus_one, NovikovScalar::constant(Rat(-1)));
    Monomial facet_mono(term->monomial);
    facet_mono.resize(all_vars.size(), 0);
    poly = poly + correction.monomial_shifted(facet_mono)
                      .scaled(NovikovScalar::t_power(term->energy));
  }
  out.poly = poly.polynomial_part(out.energies.precision);
  return out;
}

PotentialSpec compactify(PotentialSpec spec, Facet new_facet) {
  const int previous_local = spec.local_count();
  Rat distance(0);
  if (static_cast<int>(new_facet.normal.size()) != spec.polytope.dim() ||
      spec.basepoint.size() != new_facet.normal.size()) {
    fail("bad_facet", "compactifying facet has wrong dimension");
  }
  for (std::size_t i = 0; i < new_facet.normal.size(); ++i) {
    distance += Rat(new_facet.normal[i]) * spec.basepoint[i];
  }
  distance -= new_facet.offset;
  if (distance <= 0) {
    fail("basepoint_excluded",
         "the compactifying facet does not keep the basepoint strictly "
         "inside (distance " +
             rat_to_string(distance) + ")");
  }
  std::vector<Facet> facets = spec.polytope.facets();
  facets.push_back(std::move(new_facet));
  spec.polytope = Polytope(spec.polytope.dim(), std::move(facets));
  spec.local_facet_count = previous_local;
  spec.ecut = distance;
  return spec;
}

}  // namespace diskpot
