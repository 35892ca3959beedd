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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "mopar/chain.hpp"
#include "mopar/conj.hpp"
#include "mopar/errors.hpp"
#include "mopar/pipeline.hpp"
#include "mopar/verify.hpp"

namespace mopar {
namespace {

using testing::gameshow;
using testing::R;

Thresholds th(std::initializer_list<Rational> v) {
  Thresholds out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

bool has_step(const Verdict& v, TraceStep::Kind k) {
  for (const auto& t : v.trace)
    if (t.kind == k) return true;
  return false;
}

// Independent re-check of a yes-verdict on the model it answers for.
void expect_witness_meets(const Mdp& m, const Verdict& v, const Thresholds& p, bool strict) {
  ASSERT_TRUE(v.witness.has_value());
  const VerificationRecord rec = verify_strategy(m, *v.witness, 0, {true, p, strict});
  EXPECT_TRUE(rec.all_pass);
  for (const auto& c : rec.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

TEST(Project, GameShowOnZeroOne) {
  const Mdp m = gameshow();
  const Projection proj = project(m, {R(0), R(1)});
  EXPECT_EQ(proj.removed, (std::vector<std::pair<std::string, std::string>>{{"s1", "a"}, {"s2", "b"}}));
  EXPECT_EQ(proj.values, (Vector{R(1), R(1), R(1), R(0), R(1), R(1)}));
  EXPECT_EQ(proj.bottom, "bot");
  EXPECT_EQ(proj.projected.size(), m.size() + 1);
  EXPECT_EQ(proj.restricted.size(), m.size());
  const std::size_t bot = proj.projected.state_index("bot");
  EXPECT_EQ(proj.projected.priority[bot], 0u);
  for (const auto& t : proj.projected.targets)
    EXPECT_EQ(std::count(t.states.begin(), t.states.end(), bot), 0);
  EXPECT_EQ(print_mdp(proj.projected), print_mdp(testing::load_corpus("gameshow_proj01.mdp")));
}

TEST(Project, GameShowOnHalfHalfKeepsOptimalActions) {
  const Mdp m = gameshow();
  const Projection proj = project(m, {R(1, 2), R(1, 2)});
  // Every action of the game show is optimal for the sum up to scaling.
  EXPECT_EQ(proj.values[0], R(2, 3));
  EXPECT_EQ(print_mdp(proj.projected), print_mdp(testing::load_corpus("gameshow_proj11.mdp")));
}

TEST(RequireClean, NamesOffenders) {
  try {
    require_clean(testing::load_corpus("gameshow_proj11.mdp"));
    FAIL() << "expected NotClean";
  } catch (const NotClean& e) {
    EXPECT_EQ(e.kind(), NotClean::Kind::Parity);
    EXPECT_EQ(e.offenders(), std::vector<std::string>{"s1"});
  }
  // Looping at t is a sure-parity strategy, so the model is clean even
  // though no strategy combines parity with reaching goal.
  EXPECT_NO_THROW(require_clean(testing::load_corpus("fair_trap.mdp")));
  EXPECT_NO_THROW(require_clean(gameshow()));
}

TEST(DecideStrict, GameShowHalfSixth) {
  const Mdp m = gameshow();
  const Verdict v = decide_strict(m, th({R(1, 2), R(1, 6)}), 0);
  ASSERT_TRUE(v.yes);
  EXPECT_STREQ(v.witness->kind(), "stitched");
  ASSERT_TRUE(v.achieved.has_value());
  EXPECT_GT((*v.achieved)[0], R(1, 2));
  EXPECT_GT((*v.achieved)[1], R(1, 6));
  expect_witness_meets(m, v, th({R(1, 2), R(1, 6)}), true);
}

TEST(DecideStrict, CornerIsNo) {
  EXPECT_FALSE(decide_strict(gameshow(), th({R(1), R(1, 3)}), 0).yes);
}

TEST(DecideNonStrict, CornerIsNo) {
  // (1, 1/3) is attained only with the odd cycle at s1.
  const Verdict v = decide_nonstrict(gameshow(), th({R(1), R(1, 3)}), 0);
  EXPECT_FALSE(v.yes);
}

TEST(DecideNonStrict, FlatCornerIsYesWithFiniteMemory) {
  const Mdp m = gameshow();
  const Verdict v = decide_nonstrict(m, th({R(2, 3), R(2, 3)}), 0);
  ASSERT_TRUE(v.yes);
  ASSERT_TRUE(v.achieved.has_value());
  EXPECT_EQ(*v.achieved, (Vector{R(2, 3), R(2, 3)}));
  EXPECT_TRUE(has_step(v, TraceStep::Kind::VertexCase));
  expect_witness_meets(m, v, th({R(2, 3), R(2, 3)}), false);
}

TEST(DecideNonStrict, ZeroOneIsYes) {
  const Mdp m = gameshow();
  const Verdict v = decide_nonstrict(m, th({R(0), R(1)}), 0);
  ASSERT_TRUE(v.yes);
  expect_witness_meets(m, v, th({R(0), R(1)}), false);
}

TEST(DecideNonStrict, UnconstrainedTargetCountsAsZero) {
  const Mdp m = gameshow();
  Thresholds p = {std::nullopt, R(1)};
  EXPECT_TRUE(decide_nonstrict(m, p, 0).yes);
}

// The only frontier point is (1, 1); (2/3, 1) sits on the flat facet x2 = 1
// below it, so it is met by the strategy that attains (1, 1).
TEST(DecideNonStrict, PointBelowSingleVertexOnFacet) {
  const Mdp m = parse_mdp(
      "targets F1 F2\n"
      "state q0 priority 0\n"
      "sink q3 priority 2 target F1 F2\n"
      "init q0\n"
      "act q0 a q0:1/2 q3:1/2\n");
  const Verdict v = decide_nonstrict(m, th({R(2, 3), R(1)}), 0);
  ASSERT_TRUE(v.yes);
  expect_witness_meets(m, v, th({R(2, 3), R(1)}), false);
}

TEST(LexOptimize, F2ThenF1) {
  const Verdict v = lex_optimize(gameshow(), {1, 0}, 0);
  ASSERT_TRUE(v.yes);
  EXPECT_EQ(*v.optimum, (Vector{R(1), R(0)}));
}

TEST(LexOptimize, F1ThenF2HasNoMaximum) {
  // F1 = 1 needs pair1 and the s1 loop forever, which sure parity rules
  // out, while every value below 1 is beaten by looping longer.
  const Verdict v = lex_optimize(gameshow(), {0, 1}, 0);
  EXPECT_FALSE(v.yes);
  EXPECT_FALSE(v.optimum.has_value());
}

TEST(VertexCase, RejectsNonVertex) {
  try {
    vertex_case(gameshow(), {R(1, 2), R(1, 2)}, 0);
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::NotAVertex);
  }
}

TEST(InteriorCase, MixesOnTheEdge) {
  // After projecting on (1/2, 1/2) and pruning, (1/2, 5/6) lies strictly
  // between (1/3, 1) and (2/3, 2/3).
  const Mdp m = gameshow();
  const Projection proj = project(m, {R(1, 2), R(1, 2)});
  const Mdp pruned = restrict(proj.restricted, conj_region(proj.restricted).states);
  const Strategy sigma = interior_case(pruned, {R(1, 2), R(5, 6)}, pruned.state_index("s"));
  const VerificationRecord rec = verify_strategy(m, sigma, 0, {true, th({R(1, 2), R(5, 6)}), false});
  EXPECT_TRUE(rec.all_pass);
  EXPECT_THROW(interior_case(pruned, {R(1, 3), R(1)}, pruned.state_index("s")), GeometryError);
}

// Reference for the strict case: on clean models strict thresholds are met
// with sure parity exactly when they are strictly achievable for reachability.
TEST(DecideStrict, AgreesWithStrictAchievabilityOnRandomModels) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<long> num(0, 6);
  int yes = 0;
  for (int iter = 0; iter < 150; ++iter) {
    const Mdp m = testing::random_clean_mdp(rng, {.targets = 2});
    const Thresholds p = th({R(num(rng), 6), R(num(rng), 6)});
    const Verdict v = decide_strict(m, p, 0);
    EXPECT_EQ(v.yes, achievable(m, 0, p, true).yes) << print_mdp(m);
    if (v.yes) {
      ++yes;
      expect_witness_meets(m, v, p, true);
    }
  }
  EXPECT_GT(yes, 30);
}

// Reference for the non-strict case: a pure memoryless strategy with sure
// parity that meets p is a yes-certificate; a yes implies non-strict
// reachability; strict achievability implies yes.
TEST(DecideNonStrict, CoherentOnRandomModels) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<long> num(0, 6);
  int yes = 0;
  for (int iter = 0; iter < 150; ++iter) {
    const Mdp m = testing::random_clean_mdp(rng, {.targets = 2});
    Thresholds p = th({R(num(rng), 6), R(num(rng), 6)});
    if (iter % 3 == 0) {
      // Aim at the frontier itself, where the interesting cases live.
      const Polytope poly = frontier(m, 0);
      const auto& pts = poly.pure_points;
      const Vector& x = pts[rng() % pts.size()];
      p = th({x[0], x[1]});
    }
    const Verdict v = decide_nonstrict(m, p, 0);
    bool pure_witness = false;
    testing::for_each_pure(m, [&](const Memoryless& sigma) {
      const MarkovChain c = induce(m, Strategy(sigma), 0);
      if (sure_parity_on_chain(c) && dominates(reach_vector(c), {*p[0], *p[1]})) pure_witness = true;
    });
    if (pure_witness || achievable(m, 0, p, true).yes) {
      EXPECT_TRUE(v.yes) << print_mdp(m);
    }
    if (v.yes) {
      ++yes;
      EXPECT_TRUE(achievable(m, 0, p, false).yes);
      expect_witness_meets(m, v, p, false);
    }
  }
  EXPECT_GT(yes, 40);
}

TEST(VerifyStrategy, HandStitchedWitness) {
  const Mdp m = gameshow();
  Stitched st{deterministic({{"s", "pair1"}, {"s1", "a"}}), 3, share(deterministic({{"s1", "b"}, {"s2", "b"}}))};
  const VerificationRecord rec = verify_strategy(m, Strategy(st), 0, {true, th({R(3, 4), R(1, 2)}), false});
  EXPECT_TRUE(rec.all_pass);
  EXPECT_TRUE(rec.exact);
  EXPECT_FALSE(rec.certified_mode);
  EXPECT_EQ(rec.reach, (Vector{R(3, 4), R(1, 2)}));
  EXPECT_EQ(rec.memory, 4);
}

TEST(VerifyStrategy, OddCycleFailsSureParity) {
  const Mdp m = gameshow();
  const VerificationRecord rec =
      verify_strategy(m, Strategy(deterministic({{"s", "pair1"}, {"s1", "a"}})), 0, {true, {}, false});
  EXPECT_FALSE(rec.all_pass);
  bool saw = false;
  for (const auto& c : rec.checks)
    if (c.name == "sure parity") {
      saw = true;
      EXPECT_FALSE(c.pass);
    }
  EXPECT_TRUE(saw);
}

TEST(VerifyStrategy, CertifiedModeForHugeHorizon) {
  const Mdp m = gameshow();
  Stitched st{deterministic({{"s", "pair1"}, {"s1", "a"}}), Integer("1000000000000000000000000000000"),
              share(deterministic({{"s1", "b"}, {"s2", "b"}}))};
  const VerificationRecord rec = verify_strategy(m, Strategy(st), 0, {true, th({R(9, 10), R(1, 4)}), true});
  for (const auto& c : rec.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
  EXPECT_TRUE(rec.certified_mode);
  EXPECT_FALSE(rec.exact);
  EXPECT_TRUE(rec.all_pass);
  // Lower bounds never exceed the limit values (1, 1/3).
  EXPECT_LE(rec.reach[0], 1);
  EXPECT_GT(rec.reach[0], R(9, 10));
}

TEST(VerifyStrategy, WrongActionIsNotWellFormed) {
  const VerificationRecord rec =
      verify_strategy(gameshow(), Strategy(deterministic({{"s", "a"}})), 0, {true, {}, false});
  EXPECT_FALSE(rec.all_pass);
  EXPECT_EQ(rec.checks.front().name, "well-formed");
  EXPECT_FALSE(rec.checks.front().pass);
}

TEST(StatesAfter, CycleDetectionOnHugeCounts) {
  const Mdp m = gameshow();
  const Memoryless sigma = deterministic({{"s", "pair1"}, {"s1", "a"}});
  auto names = [&](const std::vector<bool>& set) {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < m.size(); ++s)
      if (set[s]) out.push_back(m.states[s]);
    return out;
  };
  EXPECT_EQ(names(states_after(m, sigma, 0, 0)), std::vector<std::string>{"s"});
  EXPECT_EQ(names(states_after(m, sigma, 0, 1)), std::vector<std::string>{"s1"});
  EXPECT_EQ(names(states_after(m, sigma, 0, 2)), (std::vector<std::string>{"s1", "r1", "r12"}));
  EXPECT_EQ(names(states_after(m, sigma, 0, Integer("123456789012345678901234567890"))),
            (std::vector<std::string>{"s1", "r1", "r12"}));
}

}  // namespace
}  // namespace mopar
