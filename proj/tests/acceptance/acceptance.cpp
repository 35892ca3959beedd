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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mopar/chain.hpp"
#include "mopar/conj.hpp"
#include "mopar/errors.hpp"
#include "mopar/moreach.hpp"
#include "mopar/pareto.hpp"
#include "mopar/pipeline.hpp"
#include "mopar/verify.hpp"

namespace mopar {
namespace {

using testing::gameshow;
using testing::R;
using Clock = std::chrono::steady_clock;

// Collects failure reasons for one criterion.
class Outcome {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool pass() const { return failures_.empty(); }
  std::string text() const {
    std::string out;
    for (const auto& s : pass() ? notes_ : failures_) out += (out.empty() ? "" : "; ") + s;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

Thresholds th(const Vector& v) {
  Thresholds out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double x) {
  std::ostringstream ss;
  ss.precision(2);
  ss << std::fixed << x;
  return ss.str();
}

// Every yes-verdict seen in this run, re-checked for the last criterion.
struct YesRecord {
  std::string where;
  const Mdp* model;
  Strategy witness;
  std::size_t s0;
  Requirement req;
};
std::vector<YesRecord> g_yes;
std::vector<std::unique_ptr<Mdp>> g_models;

const Mdp* keep(const Mdp& m) {
  g_models.push_back(std::make_unique<Mdp>(m));
  return g_models.back().get();
}

void record_yes(const std::string& where, const Mdp* m, const Verdict& v, std::size_t s0, const Thresholds& p,
                bool strict) {
  if (v.yes && v.witness) g_yes.push_back({where, m, *v.witness, s0, {true, p, strict}});
}

bool holds(const std::vector<TraceStep>& trace, TraceStep::Kind k, const std::function<bool(const TraceStep&)>& f) {
  return std::any_of(trace.begin(), trace.end(), [&](const TraceStep& t) { return t.kind == k && f(t); });
}

std::vector<std::string> region_names(const Mdp& m, const std::vector<bool>& set) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (set[s]) out.push_back(m.states[s]);
  return out;
}

bool target_clean(const Mdp& m) {
  try {
    require_clean(m);
    return true;
  } catch (const NotClean&) {
    return false;
  }
}

Outcome frontier_exactness() {
  Outcome o;
  const auto t0 = Clock::now();
  const Polytope p = frontier(gameshow(), 0);
  const double secs = seconds_since(t0);
  const std::vector<Vector> want = {{R(1, 3), R(1)}, {R(2, 3), R(2, 3)}, {R(1), R(1, 3)}};
  o.check(p.pure_points == want, "frontier vertices differ");
  o.check(secs < 1.0, "took " + fixed(secs) + " s");
  o.note("vertices (1/3, 1), (2/3, 2/3), (1, 1/3) in " + fixed(secs) + " s");
  return o;
}

Outcome strict_decision() {
  Outcome o;
  const Mdp* m = keep(gameshow());
  const Thresholds p = th({R(1, 2), R(1, 6)});
  const Verdict v = decide_strict(*m, p, 0);
  o.check(v.yes, "decide_strict answered no");
  if (v.yes) {
    const VerificationRecord rec = verify_strategy(*m, *v.witness, 0, {true, p, true});
    o.check(rec.all_pass && rec.exact, "witness failed verification");
    o.check(strictly_dominates(rec.reach, {R(1, 2), R(1, 6)}), "witness reach does not exceed (1/2, 1/6)");
    o.note("witness reaches " + to_string(rec.reach));
    record_yes("strict (1/2, 1/6)", m, v, 0, p, true);
  }
  Stitched hand{deterministic({{"s", "pair1"}, {"s1", "a"}}), 3, share(deterministic({{"s1", "b"}, {"s2", "b"}}))};
  const VerificationRecord rec = verify_strategy(*m, Strategy(hand), 0, {true, {}, false});
  o.check(rec.all_pass && rec.exact && rec.reach == Vector{R(3, 4), R(1, 2)}, "hand strategy does not give (3/4, 1/2)");
  o.note("hand strategy " + to_string(rec.reach));
  return o;
}

Outcome boundary_impossibility() {
  Outcome o;
  const Mdp* m = keep(gameshow());
  const Thresholds corner = th({R(1), R(1, 3)});
  o.check(!decide_nonstrict(*m, corner, 0).yes, "decide_nonstrict((1, 1/3)) answered yes");
  o.check(achievable(*m, 0, corner, false).yes, "(1, 1/3) is not achievable for reachability alone");
  const Thresholds top = th({R(0), R(1)});
  const Verdict v = decide_nonstrict(*m, top, 0);
  o.check(v.yes, "decide_nonstrict((0, 1)) answered no");
  record_yes("non-strict (0, 1)", m, v, 0, top, false);
  o.note("(1, 1/3) no with sure parity, yes without; (0, 1) yes");
  return o;
}

Outcome vertex_on_frontier() {
  Outcome o;
  const Mdp* m = keep(gameshow());
  const Thresholds p = th({R(2, 3), R(2, 3)});
  const Verdict v = decide_nonstrict(*m, p, 0);
  o.check(v.yes, "answered no");
  o.check(v.achieved && *v.achieved == Vector{R(2, 3), R(2, 3)}, "witness does not achieve (2/3, 2/3) exactly");
  o.check(holds(v.trace, TraceStep::Kind::Project,
                [](const TraceStep& t) { return t.direction && *t.direction == Vector{R(1, 2), R(1, 2)}; }),
          "no projection on (1/2, 1/2)");
  o.check(holds(v.trace, TraceStep::Kind::Prune,
                [](const TraceStep& t) { return t.states == std::vector<std::string>{"s1"}; }),
          "s1 was not pruned");
  o.check(holds(v.trace, TraceStep::Kind::VertexCase,
                [](const TraceStep& t) { return t.direction && (*t.direction)[0] == 2 * (*t.direction)[1]; }),
          "no vertex case with direction proportional to (2, 1)");
  record_yes("non-strict (2/3, 2/3)", m, v, 0, p, false);
  if (v.witness) o.note(std::string("witness kind ") + v.witness->kind());
  return o;
}

Outcome lexicographic() {
  Outcome o;
  const Mdp* m = keep(gameshow());
  o.check(!lex_optimize(*m, {0, 1}, 0).yes, "order (F1, F2) answered yes");
  const Verdict v = lex_optimize(*m, {1, 0}, 0);
  o.check(v.yes, "order (F2, F1) answered no");
  o.check(v.optimum && *v.optimum == Vector{R(1), R(0)}, "optimum is not (1, 0)");
  if (v.yes) {
    const Vector reach = v.record ? v.record->reach : Vector{};
    record_yes("lex (F2, F1)", m, v, 0, th(reach), false);
  }
  o.note("(F1, F2) no; (F2, F1) optimum (1, 0)");
  return o;
}

Outcome interior_of_face() {
  Outcome o;
  const Mdp* m = keep(gameshow());
  const Projection proj = project(*m, {R(1, 2), R(1, 2)});
  const Mdp pruned = restrict(proj.restricted, conj_region(proj.restricted).states);
  const Vector x = {R(1, 2), R(5, 6)};
  const Strategy sigma = interior_case(pruned, x, pruned.state_index("s"));
  const VerificationRecord rec = verify_strategy(*m, sigma, 0, {true, th(x), false});
  o.check(rec.all_pass, "interior witness failed verification");
  o.check(rec.exact && dominates(rec.reach, x), "exact reach is not >= (1/2, 5/6)");
  Verdict v;
  v.yes = true;
  v.witness = sigma;
  record_yes("interior (1/2, 5/6)", m, v, 0, th(x), false);
  o.note("reach " + to_string(rec.reach) + ", memory " + to_string(rec.memory));
  return o;
}

Outcome projection_structure() {
  Outcome o;
  const Mdp m = gameshow();
  const Projection proj = project(m, {R(0), R(1)});
  std::vector<std::string> kept;
  for (const char* s : {"s1", "s2"}) {
    const std::size_t i = proj.restricted.state_index(s);
    for (const auto& c : proj.restricted.enabled[i]) kept.push_back(std::string(s) + ":" + proj.restricted.actions[c.action]);
  }
  o.check(kept == std::vector<std::string>{"s1:b", "s2:a"}, "kept actions differ");
  const auto region = region_names(proj.restricted, conj_region(proj.restricted).states);
  o.check(std::find(region.begin(), region.end(), "s2") == region.end(), "s2 survives the pruning");
  o.check(std::find(region.begin(), region.end(), "s1") != region.end(), "s1 was pruned");
  o.note("kept {s1:b, s2:a}; pruning removes s2");
  return o;
}

Rational forward_mass(const MarkovChain& c, std::size_t steps) {
  Vector d(c.size(), R(0));
  d[c.initial] = 1;
  for (std::size_t k = 0; k < steps; ++k) {
    Vector next(c.size(), R(0));
    for (std::size_t s = 0; s < c.size(); ++s)
      for (const auto& [t, w] : c.trans[s]) next[t] += d[s] * w;
    d = std::move(next);
  }
  Rational mass = 0;
  for (std::size_t s = 0; s < c.size(); ++s)
    if (c.target_flags[s][0]) mass += d[s];
  return mass;
}

Outcome bound_formula() {
  Outcome o;
  const Mdp coin = testing::load_corpus("coin.mdp");
  const MarkovChain c = induce(coin, Strategy(deterministic({{"x", "flip"}})), 0);
  const Integer b = bound_B(c, th({R(1, 2)}));
  o.check(b == 5, "bound_B = " + to_string(b));
  o.check(forward_mass(c, 5) == R(31, 32), "Pr(<=5 steps) is not 31/32");
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 200) {
    const MarkovChain rc = testing::random_chain(rng, 5);
    const Rational pr = reach_probability(rc, 0)[rc.initial];
    if (pr == 0) continue;
    const Rational p = pr * R(static_cast<long>(rng() % 10), 10);
    const Integer rb = bound_B(rc, th({p}));
    if (!rb.fits_ulong_p() || rb > 1000000) {
      o.check(false, "bound " + to_string(rb) + " too large to check");
    } else {
      o.check(forward_mass(rc, rb.get_ui()) > p, "guarantee fails for B = " + to_string(rb));
    }
    ++checked;
  }
  o.note("coin B = 5 with 31/32; 200 random chains hold");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  int models = 0;
  auto compare = [&](const Mdp& m, const std::string& name) {
    ++models;
    try {
      const auto game = conj_region(m).states;
      const auto brute = brute_force_conj(m, oracle_memory_bound(m));
      o.check(game == brute, name + ": game and enumeration differ");
    } catch (const BudgetExceeded& e) {
      o.check(false, name + ": " + e.what());
    }
  };
  for (const auto& name : testing::corpus_names()) compare(testing::load_corpus(name), name);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    testing::RandomSpec spec;
    spec.targets = 1 + i % 2;
    spec.thirds = i % 3 == 0;
    compare(testing::random_mdp(rng, spec), "random model " + std::to_string(i));
  }
  const Mdp trap = testing::load_corpus("fair_trap.mdp");
  o.check(!conj_region(trap).states[trap.state_index("s")], "s(3)/t(2) instance answered yes");
  const double secs = seconds_since(t0);
  o.check(secs < 300, "took " + fixed(secs) + " s");
  o.note(std::to_string(models) + " models agree, s(3)/t(2) is no, " + fixed(secs) + " s");
  return o;
}

Outcome frontier_invariance() {
  Outcome o;
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<long> den(1, 12);
  int models = 0, queries = 0, skipped = 0;
  for (const auto& name : testing::corpus_names()) {
    const Mdp m = testing::load_corpus(name);
    if (!target_clean(m)) {
      ++skipped;
      continue;
    }
    const Mdp* kept = keep(m);
    ++models;
    const std::size_t s0 = m.initial.value_or(0);
    for (int i = 0; i < 100; ++i) {
      Vector p;
      for (std::size_t t = 0; t < m.num_targets(); ++t) {
        const long d = den(rng);
        p.push_back(R(static_cast<long>(rng() % static_cast<unsigned long>(d + 1)), d));
      }
      const bool reach = achievable(m, s0, th(p), true).yes;
      const Verdict v = decide_strict(m, th(p), s0);
      o.check(reach == v.yes, name + " at " + to_string(p));
      record_yes(name + " strict " + to_string(p), kept, v, s0, th(p), true);
      ++queries;
    }
  }
  o.note(std::to_string(models) + " clean corpus models, " + std::to_string(queries) + " thresholds, " +
         std::to_string(skipped) + " target-unclean models skipped");
  return o;
}

Outcome witness_self_verification() {
  Outcome o;
  // More yes-verdicts: frontier points of every clean corpus model and every
  // lexicographic order.
  std::vector<std::string> flagged;
  for (const auto& name : testing::corpus_names()) {
    const Mdp m = testing::load_corpus(name);
    if (!target_clean(m)) continue;
    const Mdp* kept = keep(m);
    const std::size_t s0 = m.initial.value_or(0);
    for (const auto& x : frontier(m, s0).pure_points) {
      const Verdict v = decide_nonstrict(m, th(x), s0);
      record_yes(name + " non-strict " + to_string(x), kept, v, s0, th(x), false);
    }
    std::vector<std::size_t> order(m.num_targets());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    do {
      const Verdict v = lex_optimize(m, order, s0);
      if (!v.yes) continue;
      const Integer mem = memory_size(*v.witness);
      const std::size_t bound = 2 * m.num_choices() * m.num_priorities();
      if (mem > bound) flagged.push_back(name + " memory " + to_string(mem) + " > " + std::to_string(bound));
      Vector reach;
      if (v.record) reach = v.record->reach;
      record_yes(name + " lex", kept, v, s0, th(reach), false);
    } while (std::next_permutation(order.begin(), order.end()));
  }
  int passed = 0;
  for (const auto& y : g_yes) {
    const VerificationRecord rec = verify_strategy(*y.model, y.witness, y.s0, y.req);
    o.check(rec.all_pass, y.where + ": witness failed verification");
    passed += rec.all_pass ? 1 : 0;
  }
  o.note(std::to_string(passed) + "/" + std::to_string(g_yes.size()) + " yes-witnesses verify");
  for (const auto& f : flagged) o.note("flag: " + f);
  if (flagged.empty()) o.note("no lex witness exceeds 2|G||P|");
  return o;
}

}  // namespace
}  // namespace mopar

int main() {
  using namespace mopar;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"frontier exactness", frontier_exactness},
      {"strict decision", strict_decision},
      {"boundary impossibility", boundary_impossibility},
      {"vertex on the frontier", vertex_on_frontier},
      {"lexicographic optimisation", lexicographic},
      {"interior of a face", interior_of_face},
      {"projection structure", projection_structure},
      {"hitting-time bound", bound_formula},
      {"conjunction oracle equivalence", oracle_equivalence},
      {"frontier invariance", frontier_invariance},
      {"witness self-verification", witness_self_verification},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    failed += o.pass() ? 0 : 1;
    std::cout << (o.pass() ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.text()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
