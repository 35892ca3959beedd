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

#include "mopar/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "mopar/errors.hpp"

namespace mopar {

NotClean::NotClean(Kind kind, std::vector<std::string> offenders)
    : Error([&] {
        std::string msg = kind == Kind::Parity ? "model is not clean w.r.t. the parity objective"
                                               : "model is not clean w.r.t. the targets";
        if (!offenders.empty()) {
          msg += "; offending states:";
          for (const auto& s : offenders) msg += " " + s;
        }
        return msg;
      }()),
      kind_(kind),
      offenders_(std::move(offenders)) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
            ": expected " + expected),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool negative = false;
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    Integer d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(Integer(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot);
    std::string_view fp = body.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    Integer whole = ip.empty() ? Integer(0) : Integer(std::string(ip), 10);
    Integer frac = fp.empty() ? Integer(0) : Integer(std::string(fp), 10);
    result = Rational(whole * scale + frac, scale);
  } else {
    if (!all_digits(body))
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    result = Rational(Integer(std::string(body), 10));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

std::string to_decimal(const Rational& r, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(r) * scale;
  // round half up on the magnitude
  Integer q = floor_of(Rational(scaled + Rational(1, 2)));
  std::string s = q.get_str(10);
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits))
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (r < 0 && q != 0) s.insert(0, "-");
  return s;
}

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

bool dominates(const Vector& a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

bool strictly_dominates(const Vector& a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] <= b[i]) return false;
  return true;
}

}  // namespace mopar
