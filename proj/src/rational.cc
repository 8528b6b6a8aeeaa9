// Copyright 2026 The stegtok Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stegtok/rational.h"

#include <cctype>
#include <cstdlib>

#include "stegtok/error.h"

namespace stegtok {
namespace {

BigInt Pow10(long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// cpp_int treats a leading 0 as an octal prefix, so strip it first.
BigInt FromDigits(std::string_view digits) {
  std::size_t first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return BigInt(std::string(digits.substr(first)));
}

// Rounds num/den (both non-negative) to the nearest integer, halves up.
BigInt RoundHalfUp(const BigInt &num, const BigInt &den) {
  return (2 * num + den) / (2 * den);
}

}  // namespace

Rational ParseFraction(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num_text = text.substr(0, slash);
  std::string_view den_text =
      slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!AllDigits(num_text) || !AllDigits(den_text)) {
    throw Error(Errc::kInvalidArgument,
                "expected NUM/DEN, got '" + std::string(text) + "'");
  }
  BigInt num = FromDigits(num_text);
  BigInt den = FromDigits(den_text);
  if (den == 0) throw Error(Errc::kInvalidArgument, "zero denominator");
  return Rational(num, den);
}

Rational ParseDecimal(std::string_view text) {
  std::string_view rest = text;
  if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
  long exponent = 0;
  auto e = rest.find_first_of("eE");
  if (e != std::string_view::npos) {
    std::string_view exp_text = rest.substr(e + 1);
    bool negative = false;
    if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
      negative = exp_text[0] == '-';
      exp_text.remove_prefix(1);
    }
    if (!AllDigits(exp_text) || exp_text.size() > 6) {
      throw Error(Errc::kInvalidArgument,
                  "bad decimal exponent in '" + std::string(text) + "'");
    }
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
    if (negative) exponent = -exponent;
    rest = rest.substr(0, e);
  }
  std::string digits;
  auto dot = rest.find('.');
  std::string_view int_part = rest.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view() : rest.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) ||
      (!int_part.empty() && !AllDigits(int_part)) ||
      (!frac_part.empty() && !AllDigits(frac_part))) {
    throw Error(Errc::kInvalidArgument,
                "bad decimal '" + std::string(text) + "'");
  }
  digits.append(int_part);
  digits.append(frac_part);
  BigInt num = FromDigits(digits);
  long scale = static_cast<long>(frac_part.size()) - exponent;
  if (scale >= 0) return Rational(num, Pow10(scale));
  return Rational(num * Pow10(-scale));
}

std::string FormatFraction(const Rational &value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

std::string FormatFixed(const Rational &value, int places) {
  BigInt num = numerator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt scaled = RoundHalfUp(num * Pow10(places), denominator(value));
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, places + 1 - digits.size(), '0');
  }
  std::string out = negative && scaled != 0 ? "-" : "";
  out += digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  return out;
}

std::string FormatSignificant(const Rational &value, int digits) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  if (num == 0) return "0";
  bool negative = num < 0;
  if (negative) num = -num;

  // Find e with 10^e <= value < 10^(e+1).
  long e = static_cast<long>(num.str().size()) -
           static_cast<long>(den.str().size());
  auto at_least_pow10 = [&](long k) {
    return k >= 0 ? num >= den * Pow10(k) : num * Pow10(-k) >= den;
  };
  while (!at_least_pow10(e)) --e;
  while (at_least_pow10(e + 1)) ++e;

  long scale = digits - 1 - e;  // value * 10^scale has `digits` int digits
  BigInt q = scale >= 0 ? RoundHalfUp(num * Pow10(scale), den)
                        : RoundHalfUp(num, den * Pow10(-scale));
  if (q == Pow10(digits)) {
    q /= 10;
    --scale;
  }
  std::string text = q.str();
  if (scale <= 0) {
    text.append(static_cast<std::size_t>(-scale), '0');
  } else {
    if (static_cast<long>(text.size()) <= scale) {
      text.insert(0, static_cast<std::size_t>(scale + 1 - text.size()), '0');
    }
    text.insert(text.size() - static_cast<std::size_t>(scale), ".");
    while (text.back() == '0') text.pop_back();
    if (text.back() == '.') text.pop_back();
  }
  return negative ? "-" + text : text;
}

}  // namespace stegtok
