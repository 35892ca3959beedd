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

#include <cstddef>
#include <string>
#include <vector>

#include "mopar/rational.hpp"

namespace mopar {

enum class Relation { Le, Eq, Ge };
enum class Sense { Maximize, Minimize };

struct Constraint {
  Vector coeffs;
  Relation rel = Relation::Le;
  Rational rhs;
};

struct LinearProgram {
  std::vector<std::string> variables;
  std::vector<bool> nonnegative;
  std::vector<Constraint> constraints;
  Vector objective;
  Sense sense = Sense::Maximize;

  std::size_t add_variable(std::string name, bool nonneg = true);
  // Pads `coeffs` with zeros up to the current variable count.
  void add_constraint(Vector coeffs, Relation rel, Rational rhs);
  std::size_t size() const { return variables.size(); }
};

struct LpOutcome {
  enum class Status { Infeasible, Unbounded, Optimal };
  Status status = Status::Infeasible;
  // Optimal: the optimum. Unbounded: a feasible point.
  Vector point;
  // Optimal only; objective value in the program's own sense.
  Rational value;
  // Optimal: dual multipliers of the maximisation form (objective negated for
  // Minimize). Infeasible: Farkas multipliers. One entry per constraint.
  Vector dual;
  // Unbounded: improving recession direction.
  Vector ray;

  bool optimal() const { return status == Status::Optimal; }
};

// Exact two-phase primal simplex with Bland's rule. Every outcome carries a
// certificate that is re-checked before returning.
LpOutcome lp_solve(const LinearProgram& lp);

// Checks the certificate stored in `out` against `lp` with exact arithmetic.
bool certificate_valid(const LinearProgram& lp, const LpOutcome& out);

// Solves `lp`, then maximises each tiebreak row in turn with all earlier
// optima pinned as equalities. Non-optimal outcomes are returned unchanged.
LpOutcome lex_vertex(const LinearProgram& lp, const std::vector<Vector>& tiebreaks);

}  // namespace mopar
