/*
 * Copyright 2026 The mopar authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace mopar {

using Integer = mpz_class;
using Rational = mpq_class;
using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

Rational make_rational(long num, long den = 1);

// Accepts "a", "a/b", "-a/b" and terminating decimals such as "0.125".
// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// Canonical text: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);
std::string to_string(const Vector& v);

// Rounded decimal rendering with `digits` fractional digits; display only.
std::string to_decimal(const Rational& r, int digits = 6);

Integer floor_of(const Rational& r);

Rational dot(const Vector& a, const Vector& b);

// Componentwise a >= b (and a > b for the strict variant).
bool dominates(const Vector& a, const Vector& b);
bool strictly_dominates(const Vector& a, const Vector& b);

}  // namespace mopar
