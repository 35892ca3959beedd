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

#include "mopar/lp.hpp"

#include <limits>
#include <optional>
#include <stdexcept>

#include "mopar/errors.hpp"

namespace mopar {

std::size_t LinearProgram::add_variable(std::string name, bool nonneg) {
  variables.push_back(std::move(name));
  nonnegative.push_back(nonneg);
  objective.resize(variables.size());
  return variables.size() - 1;
}

void LinearProgram::add_constraint(Vector coeffs, Relation rel, Rational rhs) {
  if (coeffs.size() > variables.size())
    throw std::invalid_argument("constraint has more coefficients than variables");
  coeffs.resize(variables.size());
  constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Standard form: max c.x, A x = b, x >= 0, b >= 0. Column layout is
// [plus parts | minus parts of free vars | slack/surplus | artificials].
struct Tableau {
  std::size_t m = 0;
  std::size_t cols = 0;
  Matrix t;  // m rows, cols + 1 entries (last is rhs)
  std::vector<std::size_t> basis;
  std::vector<std::size_t> initial;  // identity column of each row
  std::vector<bool> artificial;
  std::vector<bool> active;  // rows not dropped as redundant
  std::vector<int> flip;     // +1 or -1 per row
  std::vector<std::size_t> minus_col;  // per original var, kNone if nonneg
  std::size_t nvars = 0;

  void pivot(std::size_t r, std::size_t c, Vector& z) {
    const Rational inv = 1 / t[r][c];
    for (auto& v : t[r])
      if (sgn(v) != 0) v *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(t[i][c]) == 0) continue;
      const Rational f = t[i][c];
      for (std::size_t k = 0; k <= cols; ++k)
        if (sgn(t[r][k]) != 0) t[i][k] -= f * t[r][k];
    }
    if (sgn(z[c]) != 0) {
      const Rational f = z[c];
      for (std::size_t k = 0; k <= cols; ++k)
        if (sgn(t[r][k]) != 0) z[k] -= f * t[r][k];
    }
    basis[r] = c;
  }

  // z_k = c_B . T_k - c_k for all k; z[cols] is the objective value.
  Vector reduced_costs(const Vector& cost) const {
    Vector z(cols + 1);
    for (std::size_t k = 0; k < cols; ++k) z[k] = -cost[k];
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i]) continue;
      const Rational& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t k = 0; k <= cols; ++k)
        if (sgn(t[i][k]) != 0) z[k] += cb * t[i][k];
    }
    return z;
  }

  // Runs Bland pivots. Returns the entering column of an unbounded ray, or
  // kNone at optimality.
  std::size_t optimise(Vector& z, const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t k = 0; k < cols; ++k)
        if (allowed[k] && sgn(z[k]) < 0) {
          enter = k;
          break;
        }
      if (enter == kNone) return kNone;
      std::size_t leave = kNone;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (!active[i] || sgn(t[i][enter]) <= 0) continue;
        Rational ratio = t[i][cols] / t[i][enter];
        if (leave == kNone || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == kNone) return enter;
      pivot(leave, enter, z);
    }
  }

  Vector column_values() const {
    Vector x(cols, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (active[i]) x[basis[i]] = t[i][cols];
    return x;
  }

  Vector to_original(const Vector& x) const {
    Vector out(nvars);
    for (std::size_t j = 0; j < nvars; ++j) {
      out[j] = x[j];
      if (minus_col[j] != kNone) out[j] -= x[minus_col[j]];
    }
    return out;
  }

  // y_i = c_B . B^{-1} e_i, mapped back through the row flips.
  Vector duals(const Vector& cost) const {
    Vector y(m, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (active[i] && sgn(t[i][initial[r]]) != 0) s += cost[basis[i]] * t[i][initial[r]];
      y[r] = flip[r] < 0 ? Rational(-s) : s;
    }
    return y;
  }
};

Tableau build(const LinearProgram& lp) {
  Tableau tb;
  tb.nvars = lp.size();
  tb.m = lp.constraints.size();
  tb.minus_col.assign(tb.nvars, kNone);
  std::size_t col = tb.nvars;
  for (std::size_t j = 0; j < tb.nvars; ++j)
    if (!lp.nonnegative[j]) tb.minus_col[j] = col++;

  std::vector<Relation> rel(tb.m);
  tb.flip.assign(tb.m, 1);
  for (std::size_t i = 0; i < tb.m; ++i) {
    rel[i] = lp.constraints[i].rel;
    if (sgn(lp.constraints[i].rhs) < 0) {
      tb.flip[i] = -1;
      if (rel[i] == Relation::Le)
        rel[i] = Relation::Ge;
      else if (rel[i] == Relation::Ge)
        rel[i] = Relation::Le;
    }
  }
  std::vector<std::size_t> slack(tb.m, kNone);
  for (std::size_t i = 0; i < tb.m; ++i)
    if (rel[i] != Relation::Eq) slack[i] = col++;
  std::vector<std::size_t> art(tb.m, kNone);
  for (std::size_t i = 0; i < tb.m; ++i)
    if (rel[i] != Relation::Le) art[i] = col++;
  tb.cols = col;
  tb.artificial.assign(tb.cols, false);
  tb.t.assign(tb.m, Vector(tb.cols + 1, Rational(0)));
  tb.basis.assign(tb.m, kNone);
  tb.initial.assign(tb.m, kNone);
  tb.active.assign(tb.m, true);

  for (std::size_t i = 0; i < tb.m; ++i) {
    const auto& c = lp.constraints[i];
    auto& row = tb.t[i];
    for (std::size_t j = 0; j < tb.nvars; ++j) {
      if (sgn(c.coeffs[j]) == 0) continue;
      Rational v = tb.flip[i] < 0 ? Rational(-c.coeffs[j]) : c.coeffs[j];
      row[j] = v;
      if (tb.minus_col[j] != kNone) row[tb.minus_col[j]] = -v;
    }
    row[tb.cols] = tb.flip[i] < 0 ? Rational(-c.rhs) : c.rhs;
    if (rel[i] == Relation::Le) {
      row[slack[i]] = 1;
      tb.basis[i] = tb.initial[i] = slack[i];
    } else {
      if (slack[i] != kNone) row[slack[i]] = -1;
      row[art[i]] = 1;
      tb.artificial[art[i]] = true;
      tb.basis[i] = tb.initial[i] = art[i];
    }
  }
  return tb;
}

}  // namespace

LpOutcome lp_solve(const LinearProgram& lp) {
  if (lp.nonnegative.size() != lp.size()) throw std::invalid_argument("lp: bad variable flags");
  for (const auto& c : lp.constraints)
    if (c.coeffs.size() != lp.size()) throw std::invalid_argument("lp: bad constraint width");
  Vector objective = lp.objective;
  objective.resize(lp.size());

  Tableau tb = build(lp);
  LpOutcome out;

  // phase 1: maximise minus the sum of artificials
  Vector cost1(tb.cols, Rational(0));
  bool any_art = false;
  for (std::size_t k = 0; k < tb.cols; ++k)
    if (tb.artificial[k]) {
      cost1[k] = -1;
      any_art = true;
    }
  if (any_art) {
    Vector z = tb.reduced_costs(cost1);
    std::vector<bool> allowed(tb.cols, true);
    tb.optimise(z, allowed);
    if (sgn(z[tb.cols]) < 0) {
      out.status = LpOutcome::Status::Infeasible;
      out.dual = tb.duals(cost1);
      if (!certificate_valid(lp, out)) throw CertificateFailure("lp: Farkas certificate rejected");
      return out;
    }
    // drive remaining artificials out of the basis
    for (std::size_t i = 0; i < tb.m; ++i) {
      if (!tb.artificial[tb.basis[i]]) continue;
      std::size_t enter = kNone;
      for (std::size_t k = 0; k < tb.cols; ++k)
        if (!tb.artificial[k] && sgn(tb.t[i][k]) != 0) {
          enter = k;
          break;
        }
      if (enter == kNone)
        tb.active[i] = false;
      else
        tb.pivot(i, enter, z);
    }
  }

  // phase 2
  Vector cost2(tb.cols, Rational(0));
  const bool minimise = lp.sense == Sense::Minimize;
  for (std::size_t j = 0; j < tb.nvars; ++j) {
    Rational c = minimise ? Rational(-objective[j]) : objective[j];
    cost2[j] = c;
    if (tb.minus_col[j] != kNone) cost2[tb.minus_col[j]] = -c;
  }
  Vector z = tb.reduced_costs(cost2);
  std::vector<bool> allowed(tb.cols);
  for (std::size_t k = 0; k < tb.cols; ++k) allowed[k] = !tb.artificial[k];
  const std::size_t ray_col = tb.optimise(z, allowed);

  Vector x = tb.column_values();
  out.point = tb.to_original(x);
  if (ray_col != kNone) {
    Vector d(tb.cols, Rational(0));
    d[ray_col] = 1;
    for (std::size_t i = 0; i < tb.m; ++i)
      if (tb.active[i]) d[tb.basis[i]] = -tb.t[i][ray_col];
    out.status = LpOutcome::Status::Unbounded;
    out.ray = tb.to_original(d);
    if (!certificate_valid(lp, out)) throw CertificateFailure("lp: unbounded ray rejected");
    return out;
  }
  out.status = LpOutcome::Status::Optimal;
  out.value = dot(objective, out.point);
  out.dual = tb.duals(cost2);
  if (!certificate_valid(lp, out)) throw CertificateFailure("lp: optimality certificate rejected");
  return out;
}

namespace {

bool sign_ok(Relation rel, const Rational& y) {
  switch (rel) {
    case Relation::Le: return sgn(y) >= 0;
    case Relation::Ge: return sgn(y) <= 0;
    case Relation::Eq: return true;
  }
  return false;
}

bool primal_feasible(const LinearProgram& lp, const Vector& x) {
  if (x.size() != lp.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (lp.nonnegative[j] && sgn(x[j]) < 0) return false;
  for (const auto& c : lp.constraints) {
    Rational lhs = dot(c.coeffs, x);
    if (c.rel == Relation::Le && lhs > c.rhs) return false;
    if (c.rel == Relation::Ge && lhs < c.rhs) return false;
    if (c.rel == Relation::Eq && lhs != c.rhs) return false;
  }
  return true;
}

Vector transpose_times(const LinearProgram& lp, const Vector& y) {
  Vector a(lp.size(), Rational(0));
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    if (sgn(y[i]) == 0) continue;
    const auto& c = lp.constraints[i].coeffs;
    for (std::size_t j = 0; j < lp.size(); ++j)
      if (sgn(c[j]) != 0) a[j] += y[i] * c[j];
  }
  return a;
}

}  // namespace

bool certificate_valid(const LinearProgram& lp, const LpOutcome& out) {
  const std::size_t m = lp.constraints.size();
  Vector objective = lp.objective;
  objective.resize(lp.size());
  switch (out.status) {
    case LpOutcome::Status::Infeasible: {
      if (out.dual.size() != m) return false;
      for (std::size_t i = 0; i < m; ++i)
        if (!sign_ok(lp.constraints[i].rel, out.dual[i])) return false;
      Vector ya = transpose_times(lp, out.dual);
      for (std::size_t j = 0; j < lp.size(); ++j) {
        if (lp.nonnegative[j] ? sgn(ya[j]) < 0 : sgn(ya[j]) != 0) return false;
      }
      Rational yb = 0;
      for (std::size_t i = 0; i < m; ++i) yb += out.dual[i] * lp.constraints[i].rhs;
      return sgn(yb) < 0;
    }
    case LpOutcome::Status::Unbounded: {
      if (!primal_feasible(lp, out.point) || out.ray.size() != lp.size()) return false;
      for (std::size_t j = 0; j < lp.size(); ++j)
        if (lp.nonnegative[j] && sgn(out.ray[j]) < 0) return false;
      for (const auto& c : lp.constraints) {
        Rational ad = dot(c.coeffs, out.ray);
        if (c.rel == Relation::Le && sgn(ad) > 0) return false;
        if (c.rel == Relation::Ge && sgn(ad) < 0) return false;
        if (c.rel == Relation::Eq && sgn(ad) != 0) return false;
      }
      Rational gain = dot(objective, out.ray);
      return lp.sense == Sense::Maximize ? sgn(gain) > 0 : sgn(gain) < 0;
    }
    case LpOutcome::Status::Optimal: {
      if (!primal_feasible(lp, out.point) || out.dual.size() != m) return false;
      if (out.value != dot(objective, out.point)) return false;
      Vector c = objective;
      if (lp.sense == Sense::Minimize)
        for (auto& v : c) v = -v;
      for (std::size_t i = 0; i < m; ++i)
        if (!sign_ok(lp.constraints[i].rel, out.dual[i])) return false;
      Vector ya = transpose_times(lp, out.dual);
      for (std::size_t j = 0; j < lp.size(); ++j) {
        if (lp.nonnegative[j] ? ya[j] < c[j] : ya[j] != c[j]) return false;
      }
      Rational yb = 0;
      for (std::size_t i = 0; i < m; ++i) yb += out.dual[i] * lp.constraints[i].rhs;
      return yb == dot(c, out.point);
    }
  }
  return false;
}

LpOutcome lex_vertex(const LinearProgram& lp, const std::vector<Vector>& tiebreaks) {
  LpOutcome out = lp_solve(lp);
  if (!out.optimal()) return out;
  LinearProgram cur = lp;
  Vector primary = lp.objective;
  primary.resize(lp.size());
  cur.add_constraint(primary, Relation::Eq, out.value);
  for (const auto& w : tiebreaks) {
    cur.objective = w;
    cur.objective.resize(cur.size());
    cur.sense = Sense::Maximize;
    LpOutcome step = lp_solve(cur);
    if (!step.optimal()) throw CertificateFailure("lex_vertex: tiebreak stage lost optimality");
    out.point = step.point;
    cur.add_constraint(cur.objective, Relation::Eq, step.value);
  }
  out.value = dot(primary, out.point);
  return out;
}

}  // namespace mopar
