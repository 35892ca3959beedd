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

#include "mopar/moreach.hpp"

#include <map>

#include "mopar/errors.hpp"

namespace mopar {

Vector OccupationLp::reach(const Vector& y) const {
  Vector r = offset;
  for (std::size_t i = 0; i < absorption.size(); ++i) r[i] += dot(absorption[i], y);
  return r;
}

OccupationLp build_occupation_lp(const Mdp& m, std::size_t s0) {
  OccupationLp occ;
  occ.start = s0;
  const std::size_t n = m.size();
  const std::size_t nt = m.num_targets();
  const auto f = m.target_union();
  occ.offset.assign(nt, Rational(0));
  occ.absorption.assign(nt, Vector{});
  if (f[s0]) {
    const auto flags = m.target_flags(s0);
    for (std::size_t i = 0; i < nt; ++i) occ.offset[i] = flags[i] ? 1 : 0;
    return occ;
  }
  const auto reach = reachable_states(m, s0);
  std::vector<std::size_t> row_of(n, kNoOrigin);
  std::size_t rows = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (reach[s] && !f[s]) row_of[s] = rows++;
  for (std::size_t s = 0; s < n; ++s) {
    if (row_of[s] == kNoOrigin) continue;
    for (std::size_t k = 0; k < m.enabled[s].size(); ++k) {
      occ.pairs.emplace_back(s, k);
      occ.lp.add_variable("y(" + m.states[s] + "," + m.actions[m.enabled[s][k].action] + ")");
    }
  }
  const std::size_t nv = occ.pairs.size();
  Matrix balance(rows, Vector(nv, Rational(0)));
  for (auto& row : occ.absorption) row.assign(nv, Rational(0));
  for (std::size_t v = 0; v < nv; ++v) {
    const auto [s, k] = occ.pairs[v];
    balance[row_of[s]][v] += 1;
    for (const auto& [t, w] : m.enabled[s][k].dist) {
      if (row_of[t] != kNoOrigin) balance[row_of[t]][v] -= w;
      if (f[t]) {
        const auto flags = m.target_flags(t);
        for (std::size_t i = 0; i < nt; ++i)
          if (flags[i]) occ.absorption[i][v] += w;
      }
    }
  }
  for (std::size_t s = 0; s < n; ++s)
    if (row_of[s] != kNoOrigin)
      occ.lp.add_constraint(balance[row_of[s]], Relation::Eq, s == s0 ? Rational(1) : Rational(0));
  occ.lp.objective.assign(nv, Rational(0));
  return occ;
}

Achievability achievable(const Mdp& m, std::size_t s0, const Thresholds& p, bool strict, bool check_clean) {
  if (p.size() != m.num_targets()) throw std::invalid_argument("threshold vector has the wrong length");
  if (check_clean) {
    auto report = check_clean_targets(m);
    if (!report.clean) throw NotClean(NotClean::Kind::Targets, report.offenders);
  }
  OccupationLp occ = build_occupation_lp(m, s0);
  LinearProgram lp = occ.lp;
  const std::size_t nv = lp.size();
  bool constrained = false;
  for (const auto& pi : p) constrained = constrained || pi.has_value();

  Achievability out;
  if (strict && constrained) {
    const std::size_t t = lp.add_variable("t", false);
    for (auto& c : lp.constraints) c.coeffs.resize(lp.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p[i]) continue;
      Vector row = occ.absorption[i];
      row.resize(lp.size());
      row[t] = -1;
      lp.add_constraint(row, Relation::Ge, *p[i] - occ.offset[i]);
    }
    lp.objective.assign(lp.size(), Rational(0));
    lp.objective[t] = 1;
    lp.sense = Sense::Maximize;
  } else {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i]) lp.add_constraint(occ.absorption[i], Relation::Ge, *p[i] - occ.offset[i]);
    lp.objective.assign(lp.size(), Rational(0));
  }
  LpOutcome res = lp_solve(lp);
  if (res.status == LpOutcome::Status::Unbounded)
    throw CertificateFailure("occupation LP unexpectedly unbounded");
  if (!res.optimal()) return out;
  out.occupation.assign(res.point.begin(), res.point.begin() + static_cast<std::ptrdiff_t>(nv));
  out.reach = occ.reach(out.occupation);
  if (strict && constrained) {
    out.margin = res.value;
    out.yes = sgn(res.value) > 0;
  } else if (strict) {
    out.margin = 1;
    out.yes = true;
  } else {
    out.yes = true;
  }
  return out;
}

Memoryless extract_memoryless(const Mdp& m, const OccupationLp& occ, const Vector& y) {
  Memoryless sigma;
  std::map<std::size_t, Rational> total;
  for (std::size_t v = 0; v < occ.pairs.size(); ++v) total[occ.pairs[v].first] += y[v];
  for (std::size_t v = 0; v < occ.pairs.size(); ++v) {
    const auto [s, k] = occ.pairs[v];
    if (sgn(y[v]) == 0) continue;
    sigma.choice[m.states[s]].emplace_back(m.actions[m.enabled[s][k].action], y[v] / total[s]);
  }
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.is_sink(s) || sigma.choice.count(m.states[s])) continue;
    sigma.choice[m.states[s]] = {{m.actions[m.enabled[s][0].action], Rational(1)}};
  }
  return sigma;
}

MarkovChain full_chain(const Mdp& m, const Memoryless& sigma) {
  MarkovChain c;
  c.num_targets = m.num_targets();
  for (std::size_t s = 0; s < m.size(); ++s) {
    c.labels.push_back(m.states[s]);
    c.origin.push_back(s);
    c.priority.push_back(m.priority[s]);
    c.target_flags.push_back(m.target_flags(s));
    auto it = sigma.choice.find(m.states[s]);
    auto dist = resolve(m, s, it == sigma.choice.end() ? nullptr : &it->second);
    std::map<std::size_t, Rational> row;
    for (const auto& [k, w] : dist)
      for (const auto& [t, p] : m.enabled[s][k].dist) row[t] += w * p;
    c.trans.emplace_back(row.begin(), row.end());
  }
  return c;
}

MaxReach max_reach_values(const Mdp& m, const std::vector<bool>& goal) {
  const std::size_t n = m.size();
  const auto good = can_reach(m, goal);
  std::vector<std::size_t> var(n, kNoOrigin);
  LinearProgram lp;
  for (std::size_t s = 0; s < n; ++s)
    if (good[s] && !goal[s]) var[s] = lp.add_variable("x(" + m.states[s] + ")");
  for (std::size_t s = 0; s < n; ++s) {
    if (var[s] == kNoOrigin) continue;
    for (const auto& c : m.enabled[s]) {
      Vector row(lp.size(), Rational(0));
      Rational rhs = 0;
      row[var[s]] += 1;
      for (const auto& [t, w] : c.dist) {
        if (goal[t])
          rhs += w;
        else if (var[t] != kNoOrigin)
          row[var[t]] -= w;
      }
      lp.add_constraint(row, Relation::Ge, rhs);
    }
  }
  lp.objective.assign(lp.size(), Rational(1));
  lp.sense = Sense::Minimize;

  MaxReach out;
  out.values.assign(n, Rational(0));
  if (lp.size() > 0) {
    LpOutcome res = lp_solve(lp);
    if (!res.optimal()) throw CertificateFailure("max-reach LP has no optimum");
    for (std::size_t s = 0; s < n; ++s)
      if (var[s] != kNoOrigin) out.values[s] = res.point[var[s]];
  }
  for (std::size_t s = 0; s < n; ++s)
    if (goal[s]) out.values[s] = 1;

  // among value-conserving choices, step towards the goal
  std::vector<std::size_t> rank(n, kNoOrigin), pick(n, kNoOrigin);
  for (std::size_t s = 0; s < n; ++s)
    if (goal[s]) rank[s] = 0;
  for (std::size_t r = 1;; ++r) {
    std::vector<std::size_t> added;
    for (std::size_t s = 0; s < n; ++s) {
      if (rank[s] != kNoOrigin || var[s] == kNoOrigin) continue;
      for (std::size_t k = 0; k < m.enabled[s].size(); ++k) {
        Rational v = 0;
        bool progress = false;
        for (const auto& [t, w] : m.enabled[s][k].dist) {
          v += w * out.values[t];
          if (rank[t] != kNoOrigin && rank[t] < r) progress = true;
        }
        if (v == out.values[s] && progress) {
          pick[s] = k;
          added.push_back(s);
          break;
        }
      }
    }
    if (added.empty()) break;
    for (auto s : added) rank[s] = r;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (m.is_sink(s)) continue;
    std::size_t k = pick[s];
    if (k == kNoOrigin) {
      if (var[s] != kNoOrigin) throw CertificateFailure("max-reach: no progressing optimal action at " + m.states[s]);
      k = 0;
    }
    out.strategy.choice[m.states[s]] = {{m.actions[m.enabled[s][k].action], Rational(1)}};
  }

  const MarkovChain c = full_chain(m, out.strategy);
  const Vector check = reach_probability(c, goal);
  if (check != out.values) throw CertificateFailure("max-reach strategy does not attain the optimal values");
  return out;
}

Integer bound_B(const MarkovChain& c, const Thresholds& p) {
  Integer best = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i]) continue;
    const auto goal = c.target_set(i);
    const Rational pr = reach_probability(c, goal)[c.initial];
    if (pr <= *p[i]) throw ThresholdNotStrictlyExceeded(i);
    const Rational e = expected_hitting_time(c, goal)[c.initial];
    const Integer b = floor_of(Rational(e / (pr - *p[i]))) + 1;
    if (b > best) best = b;
  }
  return best;
}

CleanReport check_clean_targets(const Mdp& m) {
  CleanReport r;
  const auto f = m.target_union();
  for (std::size_t s = 0; s < m.size(); ++s)
    if (f[s] && !m.is_sink(s)) r.offenders.push_back(m.states[s]);
  const MaxReach mr = max_reach_values(m, f);
  for (std::size_t s = 0; s < m.size(); ++s)
    if (mr.values[s] != 1 && !f[s]) r.offenders.push_back(m.states[s]);
  r.clean = r.offenders.empty();
  return r;
}

DirectionalOptimum optimize_direction(const Mdp& m, std::size_t s0, const Vector& w) {
  OccupationLp occ = build_occupation_lp(m, s0);
  const std::size_t nt = m.num_targets();
  DirectionalOptimum out;
  if (occ.pairs.empty()) {
    out.point = occ.offset;
    out.value = dot(w, out.point);
    for (std::size_t s = 0; s < m.size(); ++s)
      if (!m.is_sink(s)) out.strategy.choice[m.states[s]] = {{m.actions[m.enabled[s][0].action], Rational(1)}};
    return out;
  }
  LinearProgram lp = occ.lp;
  lp.objective.assign(lp.size(), Rational(0));
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t v = 0; v < lp.size(); ++v) lp.objective[v] += w[i] * occ.absorption[i][v];
  lp.sense = Sense::Maximize;
  LpOutcome res = lex_vertex(lp, occ.absorption);
  if (!res.optimal()) throw NotClean(NotClean::Kind::Targets, {m.states[s0]});
  out.strategy = extract_memoryless(m, occ, res.point);
  out.point = occ.reach(res.point);
  out.value = dot(w, out.point);
  return out;
}

}  // namespace mopar
