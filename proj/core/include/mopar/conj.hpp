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
#include <vector>

#include "mopar/mdp.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

struct ConjResult {
  // States s with a strategy satisfying S(parity) and Pr=1(<> F), where F is
  // the union of all targets.
  std::vector<bool> states;
  // One controller for the whole region: its initial mode dispatches on the
  // current state, so it can be started anywhere in `states`.
  Fsm strategy;
};

// Solves the fair-adversary game for parity and almost-sure reachability of
// the target union. Every returned strategy is re-checked on its induced
// chain from every winning state; a failure raises CertificateFailure.
ConjResult conj_region(const Mdp& m);

inline constexpr std::size_t kDefaultOracleBudget = 2000;
// Search nodes the oracle may expand before giving up with BudgetExceeded.
inline constexpr std::size_t kOracleSearchSteps = 2000000;

// min(2 * |choices| * |priorities|, 6).
std::size_t oracle_memory_bound(const Mdp& m);

// Exhaustive search over pure strategies with at most `memory_bound` modes.
// Throws BudgetExceeded when |S| * |Act| * memory_bound > budget.
std::vector<bool> brute_force_conj(const Mdp& m, std::size_t memory_bound,
                                   std::size_t budget = kDefaultOracleBudget);

}  // namespace mopar
