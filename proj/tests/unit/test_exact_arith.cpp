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
#include "mopar/errors.hpp"
#include "mopar/linalg.hpp"
#include "mopar/lp.hpp"
#include "mopar/moreach.hpp"

namespace mopar {
namespace {

using testing::R;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("1/3"), R(1, 3));
  EXPECT_EQ(parse_rational("2/4"), R(1, 2));
  EXPECT_EQ(parse_rational("-7"), R(-7));
  EXPECT_EQ(parse_rational("0.125"), R(1, 8));
  EXPECT_EQ(parse_rational("1.0"), R(1));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, CanonicalText) {
  EXPECT_EQ(to_string(R(6, 4)), "3/2");
  EXPECT_EQ(to_string(R(4, 2)), "2");
  EXPECT_EQ(to_decimal(R(2, 3), 4), "0.6667");
  EXPECT_EQ(floor_of(R(-1, 2)), -1);
}

TEST(SolveLinearSystem, TwoByTwoByHand) {
  Matrix a = {{R(1), R(-1, 2)}, {R(0), R(1)}};
  EXPECT_EQ(solve_linear_system(a, {R(1, 2), R(1)}), (Vector{R(1), R(1)}));
}

TEST(SolveLinearSystem, IdentityReturnsRhs) {
  Matrix id(3, Vector(3, R(0)));
  for (int i = 0; i < 3; ++i) id[i][i] = 1;
  Vector b = {R(5), R(-2, 3), R(7, 11)};
  EXPECT_EQ(solve_linear_system(id, b), b);
}

TEST(SolveLinearSystem, SingularNamesDependentRow) {
  Matrix a = {{R(1), R(1)}, {R(2), R(2)}};
  try {
    solve_linear_system(a, {R(1), R(2)});
    FAIL() << "expected SingularSystem";
  } catch (const SingularSystem& e) {
    EXPECT_EQ(e.dependent_row(), 1u);
  }
}

TEST(SolveLinearSystem, RoundTripOnRandomNonsingular) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  int solved = 0;
  while (solved < 50) {
    Matrix a(5, Vector(5));
    Vector x0(5);
    for (auto& row : a)
      for (auto& v : row) v = R(num(rng), den(rng));
    for (auto& v : x0) v = R(num(rng), den(rng));
    if (rank(a) < 5) continue;
    const Vector b = mat_vec(a, x0);
    const Vector x = solve_linear_system(a, b);
    EXPECT_EQ(x, x0);
    EXPECT_EQ(mat_vec(a, x), b);
    ++solved;
  }
}

TEST(NullSpace, OneDimensionalKernel) {
  Matrix a = {{R(1), R(1), R(0)}, {R(0), R(1), R(1)}};
  const auto basis = null_space(a, 3);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(mat_vec(a, basis[0]), (Vector{R(0), R(0)}));
}

LinearProgram box_lp() {
  LinearProgram lp;
  lp.add_variable("x1");
  lp.add_variable("x2");
  lp.add_constraint({R(1), R(0)}, Relation::Le, R(1));
  lp.add_constraint({R(0), R(1)}, Relation::Le, R(1));
  lp.objective = {R(1), R(1)};
  return lp;
}

TEST(LpSolve, UnitBox) {
  const LinearProgram lp = box_lp();
  const LpOutcome out = lp_solve(lp);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.value, R(2));
  EXPECT_EQ(out.point, (Vector{R(1), R(1)}));
  EXPECT_TRUE(certificate_valid(lp, out));
}

TEST(LpSolve, Unbounded) {
  LinearProgram lp;
  lp.add_variable("x");
  lp.objective = {R(1)};
  const LpOutcome out = lp_solve(lp);
  EXPECT_EQ(out.status, LpOutcome::Status::Unbounded);
  EXPECT_TRUE(certificate_valid(lp, out));
}

TEST(LpSolve, Infeasible) {
  LinearProgram lp;
  lp.add_variable("x");
  lp.add_constraint({R(1)}, Relation::Ge, R(2));
  lp.add_constraint({R(1)}, Relation::Le, R(1));
  lp.objective = {R(1)};
  const LpOutcome out = lp_solve(lp);
  EXPECT_EQ(out.status, LpOutcome::Status::Infeasible);
  EXPECT_TRUE(certificate_valid(lp, out));
}

TEST(LpSolve, MinimiseAndFreeVariables) {
  LinearProgram lp;
  lp.add_variable("x", false);
  lp.add_variable("y");
  lp.add_constraint({R(1), R(1)}, Relation::Ge, R(-3));
  lp.add_constraint({R(1), R(-1)}, Relation::Eq, R(-5, 2));
  lp.objective = {R(1), R(0)};
  lp.sense = Sense::Minimize;
  const LpOutcome out = lp_solve(lp);
  ASSERT_TRUE(out.optimal());
  // x + y >= -3 and y = x + 5/2 give x >= -11/4; y >= 0 gives x >= -5/2.
  EXPECT_EQ(out.value, R(-5, 2));
  EXPECT_TRUE(certificate_valid(lp, out));
}

// Reference solver: enumerate every basic solution of the system made of
// the constraints plus the bounds 0 <= x_i <= cap and keep the feasible one
// with the best objective. Uses its own elimination so it shares no code
// with the simplex.
std::optional<Rational> brute_force_max(const LinearProgram& lp, const Rational& cap) {
  const std::size_t n = lp.size();
  std::vector<Constraint> rows = lp.constraints;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, R(0));
    e[i] = 1;
    rows.push_back({e, Relation::Ge, R(0)});
    rows.push_back({e, Relation::Le, cap});
  }
  auto feasible = [&](const Vector& x) {
    for (const auto& c : rows) {
      Rational lhs = 0;
      for (std::size_t i = 0; i < n; ++i) lhs += c.coeffs[i] * x[i];
      if ((c.rel == Relation::Le && lhs > c.rhs) || (c.rel == Relation::Ge && lhs < c.rhs) ||
          (c.rel == Relation::Eq && lhs != c.rhs))
        return false;
    }
    return true;
  };
  auto solve = [&](const std::vector<std::size_t>& pick) -> std::optional<Vector> {
    Matrix a;
    for (auto r : pick) {
      Vector row = rows[r].coeffs;
      row.push_back(rows[r].rhs);
      a.push_back(row);
    }
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && a[piv][col] == 0) ++piv;
      if (piv == n) return std::nullopt;
      std::swap(a[piv], a[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || a[r][col] == 0) continue;
        const Rational f = a[r][col] / a[col][col];
        for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
      }
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
  };
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() == n) {
      if (auto x = solve(pick); x && feasible(*x)) {
        Rational v = 0;
        for (std::size_t i = 0; i < n; ++i) v += lp.objective[i] * (*x)[i];
        if (!best || v > *best) best = v;
      }
      return;
    }
    for (std::size_t r = from; r < rows.size(); ++r) {
      pick.push_back(r);
      rec(r + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

TEST(LpSolve, AgreesWithVertexEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-4, 4), rhs(-3, 8);
  std::uniform_int_distribution<int> nv(1, 3), nc(1, 6), rel(0, 2);
  const Rational cap = 10;
  int optimal = 0, infeasible = 0;
  for (int iter = 0; iter < 300; ++iter) {
    LinearProgram lp;
    const int n = nv(rng);
    for (int i = 0; i < n; ++i) lp.add_variable("x" + std::to_string(i));
    const int m = nc(rng);
    for (int j = 0; j < m; ++j) {
      Vector row(static_cast<std::size_t>(n));
      for (auto& v : row) v = coef(rng);
      lp.add_constraint(row, static_cast<Relation>(rel(rng)), rhs(rng));
    }
    for (int i = 0; i < n; ++i) {
      Vector e(static_cast<std::size_t>(n), R(0));
      e[static_cast<std::size_t>(i)] = 1;
      lp.add_constraint(e, Relation::Le, cap);
    }
    lp.objective.resize(static_cast<std::size_t>(n));
    for (auto& v : lp.objective) v = coef(rng);

    const auto expect = brute_force_max(lp, cap);
    const LpOutcome out = lp_solve(lp);
    EXPECT_TRUE(certificate_valid(lp, out)) << "iteration " << iter;
    if (expect) {
      ASSERT_TRUE(out.optimal()) << "iteration " << iter;
      EXPECT_EQ(out.value, *expect) << "iteration " << iter;
      ++optimal;
    } else {
      EXPECT_EQ(out.status, LpOutcome::Status::Infeasible) << "iteration " << iter;
      ++infeasible;
    }
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 5);
}

TEST(LexVertex, SinglePointIgnoresTiebreak) {
  LinearProgram lp;
  lp.add_variable("x");
  lp.add_variable("y");
  lp.add_constraint({R(1), R(0)}, Relation::Eq, R(1, 2));
  lp.add_constraint({R(0), R(1)}, Relation::Eq, R(1, 3));
  lp.objective = {R(0), R(0)};
  for (const auto& order : {std::vector<Vector>{{R(1), R(0)}, {R(0), R(1)}},
                            std::vector<Vector>{{R(0), R(1)}, {R(1), R(0)}}}) {
    const LpOutcome out = lex_vertex(lp, order);
    ASSERT_TRUE(out.optimal());
    EXPECT_EQ(out.point, (Vector{R(1, 2), R(1, 3)}));
  }
}

// Maximising r1 + r2 over the game show's occupation LP is optimal on the
// whole segment from (1/3, 1) to (1, 1/3); the tiebreak order picks the end.
TEST(LexVertex, GameShowSumObjective) {
  const Mdp m = testing::gameshow();
  const OccupationLp occ = build_occupation_lp(m, 0);
  LinearProgram lp = occ.lp;
  lp.objective.assign(lp.size(), R(0));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < lp.size(); ++k) lp.objective[k] += occ.absorption[i][k];
  auto row = [&](std::size_t i) { return occ.absorption[i]; };

  const LpOutcome x1_first = lex_vertex(lp, {row(0), row(1)});
  ASSERT_TRUE(x1_first.optimal());
  EXPECT_EQ(occ.reach(x1_first.point), (Vector{R(1), R(1, 3)}));

  const LpOutcome x2_first = lex_vertex(lp, {row(1), row(0)});
  ASSERT_TRUE(x2_first.optimal());
  EXPECT_EQ(occ.reach(x2_first.point), (Vector{R(1, 3), R(1)}));
}

}  // namespace
}  // namespace mopar
