#include "diskpot/rational.hpp"

#include <cctype>

#include "diskpot/errors.hpp"

namespace diskpot {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string strip(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Rat parse_rational(const std::string& text) {
  const std::string t = strip(text);
  const std::size_t slash = t.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(t)) {
      throw ParseError("not a rational number: '" + text + "'");
    }
    return Rat(boost::multiprecision::cpp_int(t));
  }
  const std::string num = strip(t.substr(0, slash));
  const std::string den = strip(t.substr(slash + 1));
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw ParseError("not a rational number: '" + text + "'");
  }
  const boost::multiprecision::cpp_int d(den);
  if (d == 0) {
    throw ParseError("zero denominator in '" + text + "'");
  }
  return Rat(boost::multiprecision::cpp_int(num), d);
}

std::string rat_to_string(const Rat& value) {
  return value.str();  // already canonical: reduced, "p" or "p/q"
}

double rat_to_double(const Rat& value) { return value.convert_to<double>(); }

const Rat& Level::finite_value() const {
  if (!finite_) {
    fail("precision_required", "expected a finite level, got +inf");
  }
  return value_;
}

std::string Level::str() const {
  return finite_ ? rat_to_string(value_) : std::string("inf");
}

}  // namespace diskpot
