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

#ifndef STEGTOK_RATIONAL_H_
#define STEGTOK_RATIONAL_H_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace stegtok {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "NUM/DEN" or a bare integer. Throws Error(kInvalidArgument).
Rational ParseFraction(std::string_view text);

// Parses a non-negative decimal such as "0.25", "1e-3" or
// "1.23456789012345678e-05" exactly.
Rational ParseDecimal(std::string_view text);

// "num/den" in lowest terms; integers render as "n/1".
std::string FormatFraction(const Rational &value);

// Fixed-point rendering with `places` fractional digits, rounded half away
// from zero on the exact value.
std::string FormatFixed(const Rational &value, int places);

// Plain (non-exponent) decimal with at most `digits` significant digits,
// rounded half away from zero; trailing zeros are stripped.
std::string FormatSignificant(const Rational &value, int digits);

}  // namespace stegtok

#endif  // STEGTOK_RATIONAL_H_
