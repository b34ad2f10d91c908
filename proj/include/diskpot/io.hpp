#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diskpot/floer.hpp"
#include "diskpot/potential.hpp"
#include "diskpot/solver.hpp"

namespace diskpot {

// One parsed input file: the potential specification plus the optional
// extras that individual commands consume (an evaluation point, an energy
// schedule, a linear Hamiltonian, flag-example parameters).
struct ParsedInput {
  PotentialSpec spec;
  std::optional<std::vector<NovikovScalar>> point;  // over all variables
  std::vector<std::pair<Rat, Rat>> schedule;        // (E1, E5) samples
  std::optional<LinearHamiltonian> hamiltonian;
  std::optional<std::vector<Rat>> fiber;
  std::optional<std::pair<Rat, Rat>> flag_params;   // (a, b)
};

// Structural validation only — missing or mistyped fields throw ParseError.
// Geometric and energetic validation happens in the builders, with their own
// stable error codes.  Unknown keys are ignored, so a potential report
// (which echoes its input) is itself a valid input.
ParsedInput parse_input(const nlohmann::json& j);
ParsedInput load_input(const std::string& path);

// Canonical echo: stable key order, exact fraction strings, optionals
// omitted when absent.  parse_input(input_to_json(in)) reproduces `in`.
nlohmann::ordered_json input_to_json(const ParsedInput& in);

// Machine-readable reports (canonical key order, exact strings throughout).
nlohmann::ordered_json potential_report(const ParsedInput& in,
                                        const PotentialFunction& pf);
nlohmann::ordered_json critical_report(
    const PreparedSystem& prepared, SolveMode mode,
    const std::vector<LeadingSolution>& leading,
    const std::vector<std::optional<LiftedPoint>>& lifted);
nlohmann::ordered_json torsion_report(
    const TorsionDecomposition& td,
    const std::optional<DisplacementBound>& bounds);
nlohmann::ordered_json displacement_report(const Rat& e1, const Rat& e5,
                                           const Classification& cls,
                                           const DisplacementBound& bounds,
                                           const std::optional<Rat>& limit);
nlohmann::ordered_json hofer_report(const HoferReport& norms);
nlohmann::ordered_json flag_report_json(const FlagReport& r);

// Human-readable tables for the same data.  Exact values only; the pi factor
// stays symbolic.
std::string potential_table(const ParsedInput& in,
                            const PotentialFunction& pf);
std::string critical_table(
    const PreparedSystem& prepared, SolveMode mode,
    const std::vector<LeadingSolution>& leading,
    const std::vector<std::optional<LiftedPoint>>& lifted);
std::string torsion_table(const TorsionDecomposition& td,
                          const std::optional<DisplacementBound>& bounds);
std::string displacement_table(const Rat& e1, const Rat& e5,
                               const Classification& cls,
                               const DisplacementBound& bounds,
                               const std::optional<Rat>& limit);
std::string hofer_table(const HoferReport& norms);
std::string flag_table(const FlagReport& r);

}  // namespace diskpot
