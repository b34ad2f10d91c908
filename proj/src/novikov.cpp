#include "diskpot/novikov.hpp"

#include <cctype>

namespace diskpot {

namespace {

std::string remove_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

// One summand of the canonical grammar, sign already applied by the caller:
// either a term "c", "c*T^(e)", "T^(e)" or a truncation marker "O(T^(p))".
struct Part {
  bool is_order;  // O(T^(p))
  Rat coefficient;
  Rat exponent;  // or the precision, for order markers
};

Part parse_part(const std::string& text, int sign) {
  Part part{};
  if (text.rfind("O(", 0) == 0) {
    if (sign < 0) {
      throw ParseError("truncation marker cannot carry a sign: 'O" + text +
                       "'");
    }
    const std::string inner_prefix = "O(T^(";
    if (text.rfind(inner_prefix, 0) != 0 || text.size() < inner_prefix.size() + 2 ||
        text.substr(text.size() - 2) != "))") {
      throw ParseError("malformed truncation marker: '" + text + "'");
    }
    part.is_order = true;
    part.exponent = parse_rational(
        text.substr(inner_prefix.size(),
                    text.size() - inner_prefix.size() - 2));
    return part;
  }
  const std::size_t tpos = text.find("T^(");
  if (tpos == std::string::npos) {
    part.coefficient = parse_rational(text) * sign;
    part.exponent = 0;
    return part;
  }
  if (text.back() != ')') {
    throw ParseError("malformed term: '" + text + "'");
  }
  std::string coef = text.substr(0, tpos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  part.coefficient =
      (coef.empty() ? Rat(1) : parse_rational(coef)) * sign;
  part.exponent =
      parse_rational(text.substr(tpos + 3, text.size() - tpos - 4));
  return part;
}

}  // namespace

NovikovScalar parse_series(const std::string& text) {
  const std::string s = remove_spaces(text);
  if (s.empty()) {
    throw ParseError("empty series text");
  }
  std::vector<Part> parts;
  std::size_t pos = 0;
  int sign = 1;
  if (s[pos] == '+' || s[pos] == '-') {
    sign = s[pos] == '-' ? -1 : 1;
    ++pos;
  }
  while (pos < s.size()) {
    int depth = 0;
    std::size_t end = pos;
    while (end < s.size()) {
      const char c = s[end];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && end > pos && (c == '+' || c == '-')) break;
      ++end;
    }
    if (depth != 0 || end == pos) {
      throw ParseError("unbalanced series text: '" + text + "'");
    }
    parts.push_back(parse_part(s.substr(pos, end - pos), sign));
    if (end < s.size()) {
      sign = s[end] == '-' ? -1 : 1;
      ++end;
      if (end == s.size()) {
        throw ParseError("dangling operator in series text: '" + text + "'");
      }
    }
    pos = end;
  }

  Level precision = Level::infinity();
  NovikovScalar sum = NovikovScalar::zero();
  for (const Part& part : parts) {
    if (part.is_order) {
      precision = min(precision, Level(part.exponent));
    } else {
      sum = sum + NovikovScalar::term(part.coefficient, part.exponent);
    }
  }
  return sum.truncated(precision);
}

NumericSeries to_numeric(const NovikovScalar& s) {
  NumericSeries out = NumericSeries::zero(s.precision());
  for (const auto& [exponent, coefficient] : s.terms()) {
    out = out + NumericSeries::term({rat_to_double(coefficient), 0.0},
                                    exponent, s.precision());
  }
  return out;
}

}  // namespace diskpot
