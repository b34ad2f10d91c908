#include "diskpot/laurent.hpp"

#include <cctype>

namespace diskpot {

NumericLaurent to_numeric(const LaurentPoly& p) {
  NumericLaurent out(p.vars());
  for (const auto& [mono, coef] : p.terms()) {
    out.add_term(mono, to_numeric(coef));
  }
  return out + NumericLaurent(p.vars()).truncated(p.precision());
}

namespace {

std::string remove_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

// Splits at top-level occurrences of any character in `seps`, respecting
// parentheses.  The separator preceding each piece is reported alongside it
// ('+' for the first).
std::vector<std::pair<char, std::string>> split_top_level(
    const std::string& s, const std::string& seps, const std::string& context) {
  std::vector<std::pair<char, std::string>> out;
  char pending = '+';
  std::size_t pos = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-') &&
      seps.find(s[0]) != std::string::npos) {
    pending = s[0];
    pos = 1;
  }
  int depth = 0;
  std::size_t start = pos;
  for (; pos <= s.size(); ++pos) {
    const char c = pos < s.size() ? s[pos] : '\0';
    if (c == '(') ++depth;
    if (c == ')') --depth;
    // A sign directly after '^' belongs to an exponent, not a new term.
    const bool exponent_sign = pos > 0 && s[pos - 1] == '^';
    if (pos == s.size() || (depth == 0 && !exponent_sign &&
                            seps.find(c) != std::string::npos && pos > start)) {
      if (pos == start) {
        throw ParseError("empty factor in '" + context + "'");
      }
      out.emplace_back(pending, s.substr(start, pos - start));
      pending = c;
      start = pos + 1;
    }
  }
  if (depth != 0) {
    throw ParseError("unbalanced parentheses in '" + context + "'");
  }
  return out;
}

}  // namespace

LaurentPoly parse_laurent(const std::string& text,
                          const std::vector<std::string>& vars) {
  const std::string s = remove_spaces(text);
  if (s.empty()) {
    throw ParseError("empty polynomial text");
  }
  LaurentPoly result(vars);
  if (s == "0") return result;
  for (const auto& [sign, summand] : split_top_level(s, "+-", text)) {
    NovikovScalar coefficient =
        NovikovScalar::constant(sign == '-' ? Rat(-1) : Rat(1));
    Monomial mono(vars.size(), 0);
    for (const auto& [fsign, factor] : split_top_level(summand, "*", text)) {
      (void)fsign;  // always '+' (first factor) or '*'
      if (factor.front() == '(' && factor.back() == ')') {
        coefficient = coefficient *
                      parse_series(factor.substr(1, factor.size() - 2));
        continue;
      }
      if (factor.rfind("T^(", 0) == 0 || factor.rfind("O(", 0) == 0) {
        coefficient = coefficient * parse_series(factor);
        continue;
      }
      // var or var^k?
      const std::size_t caret = factor.find('^');
      const std::string name =
          caret == std::string::npos ? factor : factor.substr(0, caret);
      int index = -1;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == name) index = static_cast<int>(i);
      }
      if (index >= 0) {
        int e = 1;
        if (caret != std::string::npos) {
          try {
            e = std::stoi(factor.substr(caret + 1));
          } catch (const std::exception&) {
            throw ParseError("bad exponent in '" + factor + "'");
          }
        }
        mono[static_cast<std::size_t>(index)] += e;
        continue;
      }
      // Fall back to a bare rational coefficient.
      coefficient = coefficient * NovikovScalar::constant(parse_rational(factor));
    }
    result.add_term(mono, coefficient);
  }
  return result;
}

}  // namespace diskpot
