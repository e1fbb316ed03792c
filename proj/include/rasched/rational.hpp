/*
Copyright 2026 The rasched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

#include "rasched/errors.hpp"

namespace rasched {

// Exact arbitrary-precision rational. GMP keeps values in canonical
// reduced form with a positive denominator; every operation is exact.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Accepts "a" or "a/b" with decimal integers and b > 0. Anything else,
// including whitespace, is rejected.
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(text)) throw ParseError("invalid rational: '" + std::string(text) + "'");
    return Rational(Integer(std::string(text)));
  }
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw ParseError("invalid rational: '" + std::string(text) + "'");
  const Integer d{std::string(den)};
  if (d <= 0)
    throw ParseError("denominator must be positive in '" + std::string(text) + "'");
  return Rational(Integer(std::string(num)), d);
}

// Reduced "a" or "a/b" form, the external wire format for all numbers.
inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace rasched
