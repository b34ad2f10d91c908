#include "diskpot/io.hpp"

#include <fstream>
#include <sstream>

#include "diskpot/errors.hpp"

namespace diskpot {

namespace {

using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& message) { throw ParseError(message); }

const njson& member(const njson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    bad(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::string as_string(const njson& v, const char* what) {
  if (!v.is_string()) bad(std::string(what) + " must be a string");
  return v.get<std::string>();
}

long long as_integer(const njson& v, const char* what) {
  if (!v.is_number_integer()) bad(std::string(what) + " must be an integer");
  return v.get<long long>();
}

const njson& as_array(const njson& v, const char* what) {
  if (!v.is_array()) bad(std::string(what) + " must be an array");
  return v;
}

// Exact fractions only: a string holding a reduced fraction, or a JSON
// integer.  Floats are rejected — they are not exact.
Rat as_rat(const njson& v, const char* what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long long>());
  bad(std::string(what) + " must be an exact fraction string or an integer");
}

NovikovScalar as_series(const njson& v, const char* what) {
  return parse_series(as_string(v, what));
}

std::vector<Rat> rat_vector(const njson& v, const char* what) {
  std::vector<Rat> out;
  for (const njson& entry : as_array(v, what)) {
    out.push_back(as_rat(entry, what));
  }
  return out;
}

ojson rat_strings(const std::vector<Rat>& v) {
  ojson out = ojson::array();
  for (const Rat& r : v) out.push_back(rat_to_string(r));
  return out;
}

std::string mode_name(SolveMode mode) {
  return mode == SolveMode::exact ? "exact" : "numeric";
}

// "y = 1, z = -1, w = 0" rendering of name/value text pairs.
std::string joined_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string out;
  for (const auto& [name, value] : pairs) {
    if (!out.empty()) out += ", ";
    out += name + " = " + value;
  }
  return out;
}

std::string vertex_text(const std::vector<Rat>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += rat_to_string(v[i]);
  }
  return out + ")";
}

// Full coordinate list of a lifted solution: pinned values first-class, in
// potential-variable order.
template <typename Series>
std::vector<std::pair<std::string, std::string>> full_coordinates(
    const PreparedSystem& prepared,
    const std::vector<std::pair<std::string, Series>>& assignment) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < prepared.all_vars.size(); ++slot) {
    const auto fixed = prepared.fixed_values.find(static_cast<int>(slot));
    if (fixed != prepared.fixed_values.end()) {
      out.emplace_back(prepared.all_vars[slot], fixed->second.str());
    } else if (next < assignment.size()) {
      out.emplace_back(assignment[next].first, assignment[next].second.str());
      ++next;
    }
  }
  return out;
}

}  // namespace

ParsedInput parse_input(const njson& j) {
  if (!j.is_object()) bad("the input must be a JSON object");
  ParsedInput in;

  const int dim = static_cast<int>(as_integer(member(j, "dim"), "\"dim\""));
  std::vector<Facet> facets;
  for (const njson& f : as_array(member(j, "facets"), "\"facets\"")) {
    Facet facet;
    for (const njson& c : as_array(member(f, "normal"), "facet normal")) {
      facet.normal.push_back(as_integer(c, "facet normal entry"));
    }
    facet.offset = as_rat(member(f, "offset"), "facet offset");
    facet.label = as_string(member(f, "label"), "facet label");
    facets.push_back(std::move(facet));
  }
  in.spec.polytope = Polytope(dim, facets);
  in.spec.basepoint = rat_vector(member(j, "basepoint"), "basepoint entry");

  if (j.contains("variables")) {
    for (const njson& v : as_array(j.at("variables"), "\"variables\"")) {
      in.spec.variables.push_back(as_string(v, "variable name"));
    }
  }
  if (j.contains("bulk")) {
    for (const njson& b : as_array(j.at("bulk"), "\"bulk\"")) {
      BulkEntry entry;
      entry.facet_label = as_string(member(b, "facet"), "bulk facet");
      if (b.contains("weight")) {
        entry.weight = as_series(b.at("weight"), "bulk weight");
      }
      in.spec.bulk.push_back(std::move(entry));
    }
  }
  if (j.contains("outside_terms")) {
    for (const njson& t :
         as_array(j.at("outside_terms"), "\"outside_terms\"")) {
      OutsideTerm term;
      for (const njson& e :
           as_array(member(t, "monomial"), "outside-term monomial")) {
        term.monomial.push_back(
            static_cast<int>(as_integer(e, "outside-term exponent")));
      }
      term.energy = as_rat(member(t, "energy"), "outside-term energy");
      term.coefficient = t.contains("coefficient")
                             ? as_series(t.at("coefficient"),
                                         "outside-term coefficient")
                             : NovikovScalar::constant(Rat(1));
      in.spec.outside_terms.push_back(std::move(term));
    }
  }
  if (j.contains("E5")) in.spec.e5 = as_rat(j.at("E5"), "\"E5\"");
  if (j.contains("Ecut")) in.spec.ecut = as_rat(j.at("Ecut"), "\"Ecut\"");
  if (j.contains("precision")) {
    in.spec.precision_override = as_rat(j.at("precision"), "\"precision\"");
  }
  if (j.contains("local_facets")) {
    in.spec.local_facet_count =
        static_cast<int>(as_integer(j.at("local_facets"), "\"local_facets\""));
  }
  if (j.contains("assert_wide_gap")) {
    if (!j.at("assert_wide_gap").is_boolean()) {
      bad("\"assert_wide_gap\" must be a boolean");
    }
    in.spec.assert_wide_gap = j.at("assert_wide_gap").get<bool>();
  }

  if (j.contains("point")) {
    std::vector<NovikovScalar> point;
    for (const njson& c : as_array(j.at("point"), "\"point\"")) {
      point.push_back(as_series(c, "point coordinate"));
    }
    in.point = std::move(point);
  }
  if (j.contains("schedule")) {
    for (const njson& s : as_array(j.at("schedule"), "\"schedule\"")) {
      in.schedule.emplace_back(as_rat(member(s, "E1"), "schedule E1"),
                               as_rat(member(s, "E5"), "schedule E5"));
    }
  }
  if (j.contains("hamiltonian")) {
    const njson& h = j.at("hamiltonian");
    LinearHamiltonian ham;
    ham.gradient =
        rat_vector(member(h, "gradient"), "Hamiltonian gradient entry");
    ham.pi_scale = h.contains("pi_scale")
                       ? as_rat(h.at("pi_scale"), "\"pi_scale\"")
                       : Rat(1);
    in.hamiltonian = std::move(ham);
    if (h.contains("fiber")) {
      in.fiber = rat_vector(h.at("fiber"), "fiber entry");
    }
  }
  if (j.contains("flag")) {
    const njson& f = j.at("flag");
    in.flag_params = std::make_pair(as_rat(member(f, "a"), "flag a"),
                                    as_rat(member(f, "b"), "flag b"));
  }
  return in;
}

ParsedInput load_input(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) bad("cannot open input file: " + path);
  njson j;
  try {
    j = njson::parse(stream);
  } catch (const njson::parse_error& e) {
    bad("malformed JSON in " + path + ": " + e.what());
  }
  return parse_input(j);
}

ojson input_to_json(const ParsedInput& in) {
  ojson j;
  j["dim"] = in.spec.polytope.dim();
  ojson facets = ojson::array();
  for (const Facet& f : in.spec.polytope.facets()) {
    ojson facet;
    facet["normal"] = f.normal;
    facet["offset"] = rat_to_string(f.offset);
    facet["label"] = f.label;
    facets.push_back(std::move(facet));
  }
  j["facets"] = std::move(facets);
  j["basepoint"] = rat_strings(in.spec.basepoint);
  if (!in.spec.variables.empty()) j["variables"] = in.spec.variables;
  if (!in.spec.bulk.empty()) {
    ojson bulk = ojson::array();
    for (const BulkEntry& b : in.spec.bulk) {
      ojson entry;
      entry["facet"] = b.facet_label;
      if (b.weight) entry["weight"] = b.weight->str();
      bulk.push_back(std::move(entry));
    }
    j["bulk"] = std::move(bulk);
  }
  if (!in.spec.outside_terms.empty()) {
    ojson terms = ojson::array();
    for (const OutsideTerm& t : in.spec.outside_terms) {
      ojson term;
      term["monomial"] = t.monomial;
      term["energy"] = rat_to_string(t.energy);
      term["coefficient"] = t.coefficient.str();
      terms.push_back(std::move(term));
    }
    j["outside_terms"] = std::move(terms);
  }
  if (in.spec.e5) j["E5"] = rat_to_string(*in.spec.e5);
  if (in.spec.ecut) j["Ecut"] = rat_to_string(*in.spec.ecut);
  if (in.spec.precision_override) {
    j["precision"] = rat_to_string(*in.spec.precision_override);
  }
  if (in.spec.local_facet_count >= 0) {
    j["local_facets"] = in.spec.local_facet_count;
  }
  if (in.spec.assert_wide_gap) j["assert_wide_gap"] = true;
  if (in.point) {
    ojson point = ojson::array();
    for (const NovikovScalar& c : *in.point) point.push_back(c.str());
    j["point"] = std::move(point);
  }
  if (!in.schedule.empty()) {
    ojson schedule = ojson::array();
    for (const auto& [e1, e5] : in.schedule) {
      ojson sample;
      sample["E1"] = rat_to_string(e1);
      sample["E5"] = rat_to_string(e5);
      schedule.push_back(std::move(sample));
    }
    j["schedule"] = std::move(schedule);
  }
  if (in.hamiltonian) {
    ojson h;
    h["gradient"] = rat_strings(in.hamiltonian->gradient);
    h["pi_scale"] = rat_to_string(in.hamiltonian->pi_scale);
    if (in.fiber) h["fiber"] = rat_strings(*in.fiber);
    j["hamiltonian"] = std::move(h);
  }
  if (in.flag_params) {
    ojson f;
    f["a"] = rat_to_string(in.flag_params->first);
    f["b"] = rat_to_string(in.flag_params->second);
    j["flag"] = std::move(f);
  }
  return j;
}

ojson potential_report(const ParsedInput& in, const PotentialFunction& pf) {
  ojson j = input_to_json(in);
  ojson p;
  ojson vars = ojson::array();
  for (const std::string& v : pf.torus_vars) vars.push_back(v);
  for (const std::string& v : pf.weight_vars) vars.push_back(v);
  p["variables"] = std::move(vars);
  p["polynomial"] = pf.poly.str();
  p["E1"] = rat_to_string(pf.energies.e1);
  if (pf.energies.e5) p["E5"] = rat_to_string(*pf.energies.e5);
  if (pf.energies.ecut) p["Ecut"] = rat_to_string(*pf.energies.ecut);
  p["precision"] = pf.energies.precision.str();
  ojson terms = ojson::array();
  for (const FacetTerm& t : pf.facet_terms) {
    ojson term;
    term["label"] = t.label;
    term["monomial"] = t.monomial;
    term["energy"] = rat_to_string(t.energy);
    term["local"] = t.local;
    terms.push_back(std::move(term));
  }
  p["facet_terms"] = std::move(terms);
  j["potential"] = std::move(p);
  return j;
}

ojson critical_report(const PreparedSystem& prepared, SolveMode mode,
                      const std::vector<LeadingSolution>& leading,
                      const std::vector<std::optional<LiftedPoint>>& lifted) {
  ojson j;
  j["mode"] = mode_name(mode);
  j["variables"] = prepared.all_vars;
  ojson fixed;
  for (const auto& [slot, value] : prepared.fixed_values) {
    fixed[prepared.all_vars[static_cast<std::size_t>(slot)]] = value.str();
  }
  j["fixed"] = std::move(fixed);
  ojson active = ojson::array();
  for (int slot : prepared.active) {
    active.push_back(prepared.all_vars[static_cast<std::size_t>(slot)]);
  }
  j["unknowns"] = std::move(active);
  j["equations"] = prepared.equations.size();
  j["precision"] = prepared.e_max.str();

  ojson solutions = ojson::array();
  for (std::size_t i = 0; i < leading.size(); ++i) {
    const LeadingSolution& s = leading[i];
    ojson entry;
    ojson at;
    for (std::size_t k = 0; k < prepared.active.size(); ++k) {
      const std::string& name =
          prepared.all_vars[static_cast<std::size_t>(prepared.active[k])];
      at[name] = s.exact
                     ? rat_to_string(s.point[k])
                     : series_traits<std::complex<double>>::str(
                           s.numeric_point[k]);
    }
    entry["leading"] = std::move(at);
    entry["jacobian_determinant"] =
        s.exact ? rat_to_string(s.jacobian_det)
                : series_traits<std::complex<double>>::str(
                      s.numeric_jacobian_det);
    entry["nondegenerate"] = s.nondegenerate;
    entry["nullity"] = s.nullity;
    if (i < lifted.size() && lifted[i]) {
      const LiftedPoint& l = *lifted[i];
      ojson coords;
      if (l.exact) {
        for (const auto& [name, value] :
             full_coordinates(prepared, l.assignment)) {
          coords[name] = value;
        }
      } else {
        for (const auto& [name, value] :
             full_coordinates(prepared, l.numeric_assignment)) {
          coords[name] = value;
        }
      }
      entry["coordinates"] = std::move(coords);
      entry["residual_valuation"] = l.residual_valuation.str();
      entry["first_correction"] = l.first_correction.str();
      entry["iterations"] = l.iterations;
      entry["certified"] = l.certified;
    } else {
      entry["lift"] = !prepared.is_square()
                          ? "not attempted: the system is not square"
                          : "not attempted: degenerate leading solution";
    }
    solutions.push_back(std::move(entry));
  }
  j["solutions"] = std::move(solutions);
  return j;
}

ojson torsion_report(const TorsionDecomposition& td,
                     const std::optional<DisplacementBound>& bounds) {
  ojson j;
  j["betti"] = td.betti;
  ojson torsions = ojson::array();
  for (const Rat& t : td.torsions) torsions.push_back(rat_to_string(t));
  j["torsions"] = std::move(torsions);
  j["precision"] = td.precision.str();
  j["decomposition"] = td.str();
  j["displacement_floor"] = td.torsion_floor().str();
  if (bounds) {
    ojson b;
    if (bounds->bound_x) b["hofer_X"] = rat_to_string(*bounds->bound_x);
    if (bounds->bound_mixed) {
      b["hofer_mixed"] = rat_to_string(*bounds->bound_mixed);
    }
    j["bounds"] = std::move(b);
  }
  return j;
}

ojson displacement_report(const Rat& e1, const Rat& e5,
                          const Classification& cls,
                          const DisplacementBound& bounds,
                          const std::optional<Rat>& limit) {
  ojson j;
  j["E1"] = rat_to_string(e1);
  j["E5"] = rat_to_string(e5);
  j["criticality_order"] = cls.criticality_order.str();
  if (!cls.weight_valuations.empty()) {
    ojson w;
    for (const auto& [name, valuation] : cls.weight_valuations) {
      w[name] = valuation.str();
    }
    j["weight_valuations"] = std::move(w);
  }
  ojson b;
  ojson provenance;
  if (bounds.bound_x) {
    b["hofer_X"] = rat_to_string(*bounds.bound_x);
    provenance["hofer_X"] = bounds.provenance_x;
  }
  if (bounds.bound_mixed) {
    b["hofer_mixed"] = rat_to_string(*bounds.bound_mixed);
    provenance["hofer_mixed"] = bounds.provenance_mixed;
  }
  j["bounds"] = std::move(b);
  j["provenance"] = std::move(provenance);
  if (limit) j["limit_mixed"] = rat_to_string(*limit);
  return j;
}

ojson hofer_report(const HoferReport& norms) {
  ojson j;
  j["norm_ambient"] = norms.norm_ambient.str();
  if (norms.norm_fiber) j["norm_fiber"] = norms.norm_fiber->str();
  return j;
}

ojson flag_report_json(const FlagReport& r) {
  ojson j;
  j["a"] = rat_to_string(r.a);
  j["b"] = rat_to_string(r.b);
  j["max_vertex"] = rat_strings(r.max_vertex);
  j["min_vertex"] = rat_strings(r.min_vertex);
  j["norm_ambient"] = r.norm_ambient.str();
  j["norm_fiber"] = r.norm_fiber.str();
  j["mixed"] = r.mixed.str();
  j["floor"] = r.floor.str();
  j["slack"] = r.slack.str();
  j["satisfied"] = r.satisfied;
  return j;
}

std::string potential_table(const ParsedInput& in,
                            const PotentialFunction& pf) {
  std::ostringstream out;
  out << "potential function\n";
  out << "  torus variables:";
  for (const std::string& v : pf.torus_vars) out << " " << v;
  out << "\n";
  if (!pf.weight_vars.empty()) {
    out << "  weight variables:";
    for (const std::string& v : pf.weight_vars) out << " " << v;
    out << "\n";
  }
  out << "  E1 = " << rat_to_string(pf.energies.e1) << "\n";
  if (pf.energies.e5) out << "  E5 = " << rat_to_string(*pf.energies.e5)
                          << "\n";
  if (pf.energies.ecut) {
    out << "  Ecut = " << rat_to_string(*pf.energies.ecut) << "\n";
  }
  out << "  precision = " << pf.energies.precision.str() << "\n";
  out << "  basepoint = " << vertex_text(in.spec.basepoint) << "\n";
  out << "  P = " << pf.poly.str() << "\n";
  return out.str();
}

std::string critical_table(
    const PreparedSystem& prepared, SolveMode mode,
    const std::vector<LeadingSolution>& leading,
    const std::vector<std::optional<LiftedPoint>>& lifted) {
  std::ostringstream out;
  out << "critical system (" << mode_name(mode) << " mode): "
      << prepared.equations.size() << " equation(s), unknowns";
  for (int slot : prepared.active) {
    out << " " << prepared.all_vars[static_cast<std::size_t>(slot)];
  }
  if (!prepared.fixed_values.empty()) {
    std::vector<std::pair<std::string, std::string>> fixed;
    for (const auto& [slot, value] : prepared.fixed_values) {
      fixed.emplace_back(prepared.all_vars[static_cast<std::size_t>(slot)],
                         value.str());
    }
    out << "  (fixed: " << joined_pairs(fixed) << ")";
  }
  out << "\n";
  for (std::size_t i = 0; i < leading.size(); ++i) {
    const LeadingSolution& s = leading[i];
    out << "solution " << (i + 1) << "\n";
    std::vector<std::pair<std::string, std::string>> at;
    for (std::size_t k = 0; k < prepared.active.size(); ++k) {
      const std::string& name =
          prepared.all_vars[static_cast<std::size_t>(prepared.active[k])];
      at.emplace_back(name,
                      s.exact ? rat_to_string(s.point[k])
                              : series_traits<std::complex<double>>::str(
                                    s.numeric_point[k]));
    }
    out << "  leading: " << joined_pairs(at) << "\n";
    out << "  jacobian determinant = "
        << (s.exact ? rat_to_string(s.jacobian_det)
                    : series_traits<std::complex<double>>::str(
                          s.numeric_jacobian_det))
        << (s.nondegenerate ? " (nondegenerate)" : " (degenerate)");
    if (!s.nondegenerate && s.nullity >= 0) {
      out << ", nullity " << s.nullity;
    }
    out << "\n";
    if (i < lifted.size() && lifted[i]) {
      const LiftedPoint& l = *lifted[i];
      const auto coords = l.exact
                              ? full_coordinates(prepared, l.assignment)
                              : full_coordinates(prepared,
                                                 l.numeric_assignment);
      out << "  lifted: " << joined_pairs(coords) << "\n";
      out << "  residual valuation >= " << l.residual_valuation.str()
          << ", iterations " << l.iterations << ", "
          << (l.certified ? "certified" : "not certified (numeric)") << "\n";
    } else {
      out << "  lift not attempted: "
          << (!prepared.is_square() ? "the system is not square"
                                    : "degenerate leading solution")
          << "\n";
    }
  }
  if (leading.empty()) out << "no solutions\n";
  return out.str();
}

std::string torsion_table(const TorsionDecomposition& td,
                          const std::optional<DisplacementBound>& bounds) {
  std::ostringstream out;
  out << "torsion decomposition (precision " << td.precision.str() << ", "
      << (td.differential ? "differential" : "cokernel") << ")\n";
  out << "  " << td.str() << "\n";
  out << "  betti = " << td.betti << "\n";
  out << "  torsions =";
  if (td.torsions.empty()) {
    out << " (none)";
  } else {
    for (const Rat& t : td.torsions) out << " " << rat_to_string(t);
  }
  out << "\n";
  out << "  E_L >= " << td.torsion_floor().str() << "\n";
  if (bounds) {
    if (bounds->bound_x) {
      out << "  hofer_X >= " << rat_to_string(*bounds->bound_x) << "\n";
    }
    if (bounds->bound_mixed) {
      out << "  hofer_mixed >= " << rat_to_string(*bounds->bound_mixed)
          << "\n";
    }
  }
  return out.str();
}

std::string displacement_table(const Rat& e1, const Rat& e5,
                               const Classification& cls,
                               const DisplacementBound& bounds,
                               const std::optional<Rat>& limit) {
  std::ostringstream out;
  out << "displacement bounds (E1 = " << rat_to_string(e1)
      << ", E5 = " << rat_to_string(e5) << ")\n";
  out << "  criticality order = " << cls.criticality_order.str() << "\n";
  for (const auto& [name, valuation] : cls.weight_valuations) {
    out << "  v(" << name << ") = " << valuation.str() << "\n";
  }
  if (bounds.bound_x) {
    out << "  hofer_X >= " << rat_to_string(*bounds.bound_x) << "  ["
        << bounds.provenance_x << "]\n";
  }
  if (bounds.bound_mixed) {
    out << "  hofer_mixed >= " << rat_to_string(*bounds.bound_mixed) << "  ["
        << bounds.provenance_mixed << "]\n";
  }
  if (limit) {
    out << "  limit E1 -> 0: hofer_mixed >= " << rat_to_string(*limit)
        << "\n";
  }
  return out.str();
}

std::string hofer_table(const HoferReport& norms) {
  std::ostringstream out;
  out << "‖H‖_X = " << norms.norm_ambient.str() << "\n";
  if (norms.norm_fiber) {
    out << "‖H‖_S = " << norms.norm_fiber->str() << "\n";
  }
  return out.str();
}

std::string flag_table(const FlagReport& r) {
  std::ostringstream out;
  out << "flag example (a = " << rat_to_string(r.a)
      << ", b = " << rat_to_string(r.b) << ")\n";
  out << "  max vertex = " << vertex_text(r.max_vertex) << "\n";
  out << "  min vertex = " << vertex_text(r.min_vertex) << "\n";
  out << "  ‖H‖_X = " << r.norm_ambient.str() << "\n";
  out << "  ‖H‖_S = " << r.norm_fiber.str() << "\n";
  out << "  ‖H‖_X + 2‖H‖_S = " << r.mixed.str() << "\n";
  out << "  floor 2E5 = " << r.floor.str() << "\n";
  out << "  satisfied: " << (r.satisfied ? "yes" : "no") << " (slack "
      << r.slack.str() << ")\n";
  return out.str();
}

}  // namespace diskpot
