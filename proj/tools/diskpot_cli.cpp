// Batch front-end: ingest a JSON problem description, run one stage of the
// pipeline, print a table or a canonical JSON report.
//
// Exit codes: 0 success, 2 domain error (stable error code on stderr),
// 3 malformed input (JSON, fractions, or command line).

#include <cctype>
#include <complex>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "diskpot/errors.hpp"
#include "diskpot/floer.hpp"
#include "diskpot/io.hpp"
#include "diskpot/potential.hpp"
#include "diskpot/solver.hpp"

namespace {

using namespace diskpot;

// "1", "-0.5", "2i", "1+2i", "1-2i", "i", "-i".
std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("empty complex literal");
  // Split at the last sign that is neither leading nor part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto number = [](std::string part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    try {
      std::size_t used = 0;
      const double value = std::stod(part, &used);
      if (used != part.size()) throw ParseError("bad number: " + part);
      return value;
    } catch (const std::exception&) {
      throw ParseError("bad number in complex literal: " + part);
    }
  };
  if (s.back() == 'i') {
    s.pop_back();
    if (split == std::string::npos) return {0.0, number(s)};
    return {number(s.substr(0, split)), number(s.substr(split))};
  }
  if (split != std::string::npos) {
    throw ParseError("complex literal must end in 'i': " + s);
  }
  return {number(s), 0.0};
}

std::vector<std::complex<double>> parse_seed(const std::string& text) {
  std::vector<std::complex<double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    out.push_back(parse_complex(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::map<std::string, NovikovScalar> parse_fixes(
    const std::vector<std::string>& fixes) {
  std::map<std::string, NovikovScalar> out;
  for (const std::string& fix : fixes) {
    const std::size_t eq = fix.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError("--fix expects <variable>=<value>, got: " + fix);
    }
    out[fix.substr(0, eq)] = parse_series(fix.substr(eq + 1));
  }
  return out;
}

struct Options {
  std::string input;
  std::string precision;
  std::string format = "table";
  std::string mode = "exact";
  std::vector<std::string> fixes;
  std::vector<std::string> seeds;
  double newton_tolerance = 1e-10;
  double dedup_tolerance = 1e-6;
  bool limit_lambda = false;
};

std::optional<Rat> precision_flag(const Options& opt) {
  if (opt.precision.empty()) return std::nullopt;
  return parse_rational(opt.precision);
}

PotentialFunction built_potential(const ParsedInput& in) {
  return apply_bulk(build_potential(in.spec), in.spec);
}

std::vector<NovikovScalar> require_point(const ParsedInput& in) {
  if (!in.point) {
    fail("invalid_problem",
         "this command needs an evaluation point: add \"point\" to the "
         "input file");
  }
  return *in.point;
}

void emit(const Options& opt, const nlohmann::ordered_json& report,
          const std::string& table) {
  if (opt.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << table;
  }
}

void run_potential(const Options& opt) {
  ParsedInput in = load_input(opt.input);
  if (auto p = precision_flag(opt)) in.spec.precision_override = p;
  const PotentialFunction pf = built_potential(in);
  emit(opt, potential_report(in, pf), potential_table(in, pf));
}

void run_critical(const Options& opt) {
  ParsedInput in = load_input(opt.input);
  if (auto p = precision_flag(opt)) in.spec.precision_override = p;
  SolverOptions solver;
  solver.mode = opt.mode == "numeric" ? SolveMode::numeric : SolveMode::exact;
  solver.newton_tolerance = opt.newton_tolerance;
  solver.dedup_tolerance = opt.dedup_tolerance;
  for (const std::string& seed : opt.seeds) {
    solver.numeric_seeds.push_back(parse_seed(seed));
  }
  CriticalProblem problem{built_potential(in), parse_fixes(opt.fixes)};
  const PreparedSystem prepared = prepare(problem, solver);
  const std::vector<LeadingSolution> leading =
      solve_leading(prepared, solver);
  std::vector<std::optional<LiftedPoint>> lifted;
  for (const LeadingSolution& s : leading) {
    if (prepared.is_square() && s.nondegenerate) {
      lifted.emplace_back(newton_lift(prepared, s, solver));
    } else {
      lifted.emplace_back(std::nullopt);
    }
  }
  emit(opt, critical_report(prepared, solver.mode, leading, lifted),
       critical_table(prepared, solver.mode, leading, lifted));
}

void run_torsion(const Options& opt) {
  const ParsedInput in = load_input(opt.input);
  const PotentialFunction pf = built_potential(in);
  const std::vector<NovikovScalar> point = require_point(in);
  const NovikovMatrix d = potential_differential(pf, point);
  // --precision selects the decomposition's working precision; the
  // certificates below always use the potential's full declared precision.
  std::optional<Level> at;
  if (auto p = precision_flag(opt)) at = Level(*p);
  const TorsionDecomposition td =
      torsion_decomposition(d, DecompositionMode::automatic, at);
  std::optional<DisplacementBound> bounds;
  if (pf.energies.e5) {
    const Classification cls = classify_point(pf, point);
    try {
      bounds = displacement_bounds(pf.energies.e1, *pf.energies.e5, cls);
    } catch (const DomainError& e) {
      if (e.code() != std::string("missing_certificate")) throw;
    }
  }
  emit(opt, torsion_report(td, bounds), torsion_table(td, bounds));
}

void run_displacement(const Options& opt) {
  const ParsedInput in = load_input(opt.input);
  const PotentialFunction pf = built_potential(in);
  const std::vector<NovikovScalar> point = require_point(in);
  if (!pf.energies.e5) {
    fail("invalid_problem",
         "displacement bounds need a declared E5 in the input file");
  }
  const Classification cls = classify_point(pf, point);
  const DisplacementBound bounds =
      displacement_bounds(pf.energies.e1, *pf.energies.e5, cls);
  std::optional<Rat> limit;
  if (opt.limit_lambda) limit = limit_mixed_bound(in.schedule);
  emit(opt,
       displacement_report(pf.energies.e1, *pf.energies.e5, cls, bounds,
                           limit),
       displacement_table(pf.energies.e1, *pf.energies.e5, cls, bounds,
                          limit));
}

void run_hofer(const Options& opt) {
  const ParsedInput in = load_input(opt.input);
  if (in.flag_params) {
    const FlagReport report =
        flag_example_report(in.flag_params->first, in.flag_params->second);
    emit(opt, flag_report_json(report), flag_table(report));
    return;
  }
  if (in.hamiltonian) {
    const HoferReport norms =
        hofer_norms(in.spec.polytope, *in.hamiltonian, in.fiber);
    emit(opt, hofer_report(norms), hofer_table(norms));
    return;
  }
  fail("invalid_problem",
       "the hofer command needs a \"hamiltonian\" or \"flag\" section in "
       "the input file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact potential functions, critical points, and Floer-cohomology "
      "torsion over the Novikov ring"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "JSON problem description")
        ->required();
    sub->add_option("--precision", opt.precision,
                    "working precision override (exact fraction)");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    return sub;
  };

  CLI::App* potential =
      add_common(app.add_subcommand("potential", "build the potential"));
  CLI::App* critical = add_common(
      app.add_subcommand("critical", "solve the critical-point system"));
  critical->add_option("--mode", opt.mode, "leading-order solver")
      ->check(CLI::IsMember({"exact", "numeric"}));
  critical->add_option("--fix", opt.fixes,
                       "pin a variable, e.g. --fix x=1 (repeatable)");
  critical->add_option(
      "--seed", opt.seeds,
      "numeric starting point as comma-separated complex values "
      "(repeatable)");
  critical->add_option("--newton-tol", opt.newton_tolerance,
                       "numeric residual tolerance");
  critical->add_option("--dedup-tol", opt.dedup_tolerance,
                       "numeric deduplication tolerance");
  CLI::App* torsion = add_common(app.add_subcommand(
      "torsion", "decompose Floer cohomology at a critical point"));
  CLI::App* displacement = add_common(app.add_subcommand(
      "displacement", "certified displacement-energy bounds"));
  displacement->add_flag("--limit-lambda", opt.limit_lambda,
                         "extrapolate the mixed bound to E1 -> 0 from the "
                         "input's energy schedule");
  CLI::App* hofer = add_common(app.add_subcommand(
      "hofer", "Hofer norms of a linear Hamiltonian / flag example"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (potential->parsed()) run_potential(opt);
    if (critical->parsed()) run_critical(opt);
    if (torsion->parsed()) run_torsion(opt);
    if (displacement->parsed()) run_displacement(opt);
    if (hofer->parsed()) run_hofer(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
