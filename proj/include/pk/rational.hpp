#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace pk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Error raised when an input file or expression is malformed.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  std::size_t pos;
};

/// Error raised when an evaluation hits a pole or an undefined value.
class eval_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Error raised when an operation is applied to an unsupported mode or shape.
class mode_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rat(Int(text));
  Int num(text.substr(0, slash));
  Int den(text.substr(slash + 1));
  if (den == 0) throw eval_error("division-by-zero literal: " + text);
  return Rat(num, den);
}

inline std::string rational_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace pk
