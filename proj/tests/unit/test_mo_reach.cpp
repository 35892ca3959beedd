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
#include "mopar/errors.hpp"
#include "mopar/moreach.hpp"

namespace mopar {
namespace {

using testing::gameshow;
using testing::R;

Thresholds th(std::initializer_list<Rational> v) {
  Thresholds out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

TEST(Achievable, GameShowCorner) {
  const Mdp m = gameshow();
  EXPECT_FALSE(achievable(m, 0, th({R(1), R(1, 3)}), true).yes);
  EXPECT_TRUE(achievable(m, 0, th({R(1), R(1, 3)}), false).yes);
  EXPECT_TRUE(achievable(m, 0, th({R(0), R(0)}), false).yes);
}

TEST(Achievable, StrictMarginIsOptimalSlack) {
  const Mdp m = gameshow();
  const Achievability a = achievable(m, 0, th({R(1, 2), R(1, 6)}), true);
  ASSERT_TRUE(a.yes);
  // max t with x1 >= 1/2 + t, x2 >= 1/6 + t on the facet x1 + x2 <= 4/3.
  EXPECT_EQ(a.margin, R(1, 3));
}

TEST(Achievable, RefusesTargetUncleanModel) {
  const Mdp m = testing::load_corpus("gameshow_proj11.mdp");
  EXPECT_THROW(achievable(m, 0, th({R(1, 2), R(1, 2)}), false), NotClean);
}

TEST(ExtractMemoryless, ReachesAtLeastThresholds) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> num(0, 12);
  int yes = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const Mdp m = testing::random_clean_mdp(rng, {.targets = 2});
    const Thresholds p = th({R(num(rng), 12), R(num(rng), 12)});
    const Achievability a = achievable(m, 0, p, false);
    if (!a.yes) continue;
    ++yes;
    const OccupationLp occ = build_occupation_lp(m, 0);
    const Memoryless sigma = extract_memoryless(m, occ, a.occupation);
    const Vector r = reach_vector(induce(m, Strategy(sigma), 0));
    EXPECT_EQ(r, occ.reach(a.occupation));
    EXPECT_TRUE(dominates(r, {*p[0], *p[1]}));
  }
  EXPECT_GT(yes, 40);
}

// Reference: optimal reachability is attained by pure memoryless strategies.
TEST(MaxReachValues, AgreesWithPureStrategyEnumeration) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 200; ++iter) {
    const Mdp m = testing::random_mdp(rng, {.thirds = true});
    const auto goal = m.target_union();
    Vector best(m.size(), R(0));
    testing::for_each_pure(m, [&](const Memoryless& sigma) {
      for (std::size_t s = 0; s < m.size(); ++s) {
        const MarkovChain c = induce(m, Strategy(sigma), s);
        const Rational p = reach_probability(c, c.target_union())[c.initial];
        if (p > best[s]) best[s] = p;
      }
    });
    const MaxReach mr = max_reach_values(m, goal);
    EXPECT_EQ(mr.values, best) << print_mdp(m);
    for (std::size_t s = 0; s < m.size(); ++s) {
      const MarkovChain c = induce(m, Strategy(mr.strategy), s);
      EXPECT_EQ(reach_probability(c, c.target_union())[c.initial], best[s]);
    }
  }
}

TEST(MaxReachValues, GameShowF2FromEverywhere) {
  const Mdp m = gameshow();
  std::vector<bool> f2(m.size(), false);
  for (auto s : m.targets[1].states) f2[s] = true;
  const MaxReach mr = max_reach_values(m, f2);
  // r1 is a sink outside F2.
  EXPECT_EQ(mr.values, (Vector{R(1), R(1), R(1), R(0), R(1), R(1)}));
}

MarkovChain coin_chain() {
  const Mdp m = testing::load_corpus("coin.mdp");
  return induce(m, Strategy(deterministic({{"x", "flip"}})), 0);
}

TEST(BoundB, CoinAtOneHalf) {
  const MarkovChain c = coin_chain();
  EXPECT_EQ(bound_B(c, th({R(1, 2)})), 5);
  EXPECT_EQ(bounded_reach(c, c.target_set(0), 5), R(31, 32));
}

// Reference transient analysis: distribution after k steps, summed on the
// target, computed forwards (bounded_reach iterates backwards).
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

TEST(BoundB, GuaranteeOnRandomChains) {
  std::mt19937_64 rng(53);
  int checked = 0;
  while (checked < 200) {
    const MarkovChain c = testing::random_chain(rng, 5);
    const Rational pr = reach_probability(c, 0)[c.initial];
    if (pr == 0) continue;
    const Rational p = pr * R(static_cast<long>(rng() % 9), 10);
    const Integer b = bound_B(c, th({p}));
    ASSERT_TRUE(b.fits_ulong_p());
    ASSERT_LT(b, 200000);
    EXPECT_GT(forward_mass(c, b.get_ui()), p) << "B = " << b.get_str();
    ++checked;
  }
}

// Achievable sets are convex and downward closed.
TEST(Achievable, ConvexAndDownwardClosed) {
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<long> num(0, 6);
  int pairs = 0;
  for (int iter = 0; iter < 150; ++iter) {
    const Mdp m = testing::random_clean_mdp(rng, {.targets = 2});
    const Thresholds p = th({R(num(rng), 6), R(num(rng), 6)});
    const Thresholds q = th({R(num(rng), 6), R(num(rng), 6)});
    if (!achievable(m, 0, p, false).yes || !achievable(m, 0, q, false).yes) continue;
    ++pairs;
    for (const Rational& lambda : {R(0), R(1, 3), R(1, 2), R(1)}) {
      const Rational shrink = R(static_cast<long>(rng() % 4), 4);
      Thresholds x;
      for (std::size_t i = 0; i < 2; ++i) x.emplace_back((lambda * *p[i] + (1 - lambda) * *q[i]) * (1 - shrink));
      EXPECT_TRUE(achievable(m, 0, x, false).yes);
    }
  }
  EXPECT_GT(pairs, 20);
}

TEST(Achievable, StrictImpliesNonStrict) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> num(0, 12);
  for (int iter = 0; iter < 200; ++iter) {
    const Mdp m = testing::random_clean_mdp(rng, {.targets = 2});
    const Thresholds p = th({R(num(rng), 12), R(num(rng), 12)});
    if (achievable(m, 0, p, true).yes) {
      EXPECT_TRUE(achievable(m, 0, p, false).yes);
    }
  }
}

TEST(OptimizeDirection, TiebreakReturnsExactStrategyPoint) {
  const Mdp m = gameshow();
  const DirectionalOptimum o = optimize_direction(m, 0, {R(1, 2), R(1, 2)});
  EXPECT_EQ(o.value, R(2, 3));
  EXPECT_EQ(o.point, (Vector{R(1), R(1, 3)}));
  EXPECT_EQ(reach_vector(induce(m, Strategy(o.strategy), 0)), o.point);
}

TEST(CheckCleanTargets, GameShowIsClean) { EXPECT_TRUE(check_clean_targets(gameshow()).clean); }

}  // namespace
}  // namespace mopar
