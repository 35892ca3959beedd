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

#include "mopar/verify.hpp"

#include <map>

#include "mopar/errors.hpp"

namespace mopar {

std::vector<bool> states_after(const Mdp& m, const Memoryless& sigma, std::size_t s0, const Integer& steps) {
  // Only states reachable from s0 need a choice.
  const MarkovChain c = induce(m, Strategy(sigma), s0);
  auto step = [&](const std::vector<bool>& cur) {
    std::vector<bool> next(c.size(), false);
    for (std::size_t s = 0; s < c.size(); ++s)
      if (cur[s])
        for (const auto& [t, w] : c.trans[s]) next[t] = true;
    return next;
  };
  std::vector<bool> cur(c.size(), false);
  cur[c.initial] = true;
  std::map<std::vector<bool>, Integer> seen;
  for (Integer k = 0; k < steps; ++k) {
    auto [it, fresh] = seen.emplace(cur, k);
    if (!fresh) {
      const Integer period = k - it->second;
      for (Integer left = Integer(steps - k) % period; left > 0; --left) cur = step(cur);
      break;
    }
    cur = step(cur);
  }
  std::vector<bool> out(m.size(), false);
  for (std::size_t s = 0; s < c.size(); ++s)
    if (cur[s]) out[c.origin[s]] = true;
  return out;
}

namespace {

struct Analysis {
  bool parity = true;
  std::string parity_detail;
  bool exact = true;
  Vector reach;
  std::vector<std::string> notes;
};

std::string cycle_text(const MarkovChain& c, const std::vector<std::size_t>& cycle) {
  std::string out;
  for (auto v : cycle) {
    if (!out.empty()) out += " -> ";
    out += c.labels[v];
  }
  return out;
}

Analysis analyze_chain(const MarkovChain& c) {
  Analysis a;
  if (auto cyc = find_odd_cycle(c)) {
    a.parity = false;
    a.parity_detail = "odd cycle " + cycle_text(c, *cyc);
  }
  a.reach = reach_vector(c);
  return a;
}

Analysis analyze(const Mdp& m, const Strategy& sigma, std::size_t s0, const Integer& cap) {
  try {
    return analyze_chain(induce(m, sigma, s0, cap));
  } catch (const MaterializationCapExceeded&) {
  }
  Analysis a;
  a.exact = false;
  if (const auto* mix = std::get_if<Mixture>(&sigma.v)) {
    a.reach.assign(m.num_targets(), Rational(0));
    for (const auto& [w, part] : mix->parts) {
      Analysis sub = analyze(m, *part, s0, cap);
      if (!sub.parity && a.parity) {
        a.parity = false;
        a.parity_detail = sub.parity_detail;
      }
      for (std::size_t i = 0; i < a.reach.size(); ++i) a.reach[i] += w * sub.reach[i];
      a.notes.insert(a.notes.end(), sub.notes.begin(), sub.notes.end());
    }
    return a;
  }
  const auto* st = std::get_if<Stitched>(&sigma.v);
  if (!st) throw CertificateFailure("only stitched strategies can exceed the materialisation cap");

  // Reach: Pr(<>^{<=B} F_i) >= Pr(<> F_i) - E[hitting time] / (B + 1).
  const MarkovChain first = induce(m, Strategy(st->first), s0, cap);
  a.reach.assign(m.num_targets(), Rational(0));
  const Rational b1 = Rational(st->horizon + 1);
  for (std::size_t i = 0; i < m.num_targets(); ++i) {
    const auto goal = first.target_set(i);
    const Rational pr = reach_probability(first, goal)[first.initial];
    const Rational e = expected_hitting_time(first, goal)[first.initial];
    Rational lb = pr - e / b1;
    if (sgn(lb) < 0) lb = 0;
    a.reach[i] = lb;
    a.notes.push_back(m.targets[i].name + ": Pr = " + to_string(pr) + ", E = " + to_string(e) + ", B = " +
                      to_string(st->horizon) + ", bound Pr - E/(B+1) = " + to_string(lb));
  }

  // Parity: the second part must win from every state occupied at step B.
  const auto at_b = states_after(m, st->first, s0, st->horizon);
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (!at_b[s]) continue;
    const MarkovChain c = induce(m, *st->second, s, cap);
    if (auto cyc = find_odd_cycle(c)) {
      a.parity = false;
      a.parity_detail = "odd cycle after the horizon from " + m.states[s] + ": " + cycle_text(c, *cyc);
      break;
    }
  }
  a.notes.push_back("parity checked for the second part from every state occupied at step B");
  return a;
}

}  // namespace

VerificationRecord verify_strategy(const Mdp& m, const Strategy& sigma, std::size_t s0, const Requirement& req,
                                   const Integer& cap) {
  VerificationRecord rec;
  try {
    check_strategy(m, sigma);
    rec.checks.push_back({"well-formed", true, std::string("kind ") + sigma.kind()});
  } catch (const StrategyError& e) {
    rec.checks.push_back({"well-formed", false, e.what()});
    return rec;
  }
  rec.memory = memory_size(sigma);

  Analysis a;
  try {
    a = analyze(m, sigma, s0, cap);
  } catch (const StrategyError& e) {
    rec.checks.push_back({"induce", false, e.what()});
    return rec;
  }
  rec.exact = a.exact;
  rec.certified_mode = !a.exact;
  rec.reach = a.reach;
  if (rec.certified_mode) {
    std::string detail;
    for (const auto& n : a.notes) detail += (detail.empty() ? "" : "; ") + n;
    rec.checks.push_back({"certified mode", true, detail});
  }

  if (req.sure_parity) rec.checks.push_back({"sure parity", a.parity, a.parity ? "no reachable odd cycle" : a.parity_detail});

  for (std::size_t i = 0; i < req.thresholds.size() && i < m.num_targets(); ++i) {
    if (!req.thresholds[i]) continue;
    const Rational& p = *req.thresholds[i];
    const bool ok = req.strict ? a.reach[i] > p : a.reach[i] >= p;
    const std::string rel = req.strict ? " > " : " >= ";
    rec.checks.push_back({"Pr(<> " + m.targets[i].name + ")" + rel + to_string(p), ok,
                          (a.exact ? "exact " : "lower bound ") + to_string(a.reach[i])});
  }

  rec.all_pass = true;
  for (const auto& c : rec.checks) rec.all_pass = rec.all_pass && c.pass;
  return rec;
}

}  // namespace mopar
