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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mopar/chain.hpp"
#include "mopar/lp.hpp"
#include "mopar/mdp.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

// One optional threshold per target of the model; nullopt leaves the
// target unconstrained.
using Thresholds = std::vector<std::optional<Rational>>;

struct OccupationLp {
  LinearProgram lp;
  std::size_t start = 0;
  // (state, enabled-choice index) of each LP variable
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // r_i = offset[i] + absorption[i] . y
  std::vector<Vector> absorption;
  Vector offset;

  Vector reach(const Vector& y) const;
};

// Flow-balance LP over the states reachable from s0 that are not targets.
OccupationLp build_occupation_lp(const Mdp& m, std::size_t s0);

struct Achievability {
  bool yes = false;
  Rational margin;  // strict mode: optimal t*; non-strict mode: 0
  Vector occupation;
  Vector reach;
};

// Non-strict: feasibility of r_i >= p_i. Strict: maximise t subject to
// r_i >= p_i + t and answer t* > 0. Throws NotClean unless the model is
// clean with respect to its targets (skipped when check_clean is false).
Achievability achievable(const Mdp& m, std::size_t s0, const Thresholds& p, bool strict,
                         bool check_clean = true);

Memoryless extract_memoryless(const Mdp& m, const OccupationLp& occ, const Vector& y);

struct MaxReach {
  Vector values;
  Memoryless strategy;
};

// Optimal values of Pr(<> goal) and a memoryless deterministic strategy
// attaining them from every state.
MaxReach max_reach_values(const Mdp& m, const std::vector<bool>& goal);

// max_i floor(E[hitting time of F_i] / (Pr(<> F_i) - p_i)) + 1 over the
// constrained targets, measured from the chain's initial state.
Integer bound_B(const MarkovChain& c, const Thresholds& p);

struct CleanReport {
  bool clean = true;
  std::vector<std::string> offenders;
};

CleanReport check_clean_targets(const Mdp& m);

struct DirectionalOptimum {
  Vector point;
  Rational value;
  Memoryless strategy;
};

// Maximises w . r over the occupation LP, breaking ties lexicographically
// on r_1, ..., r_n. The returned point is the exact reach vector of the
// returned strategy.
DirectionalOptimum optimize_direction(const Mdp& m, std::size_t s0, const Vector& w);

// Markov chain of a memoryless strategy over all model states (no trimming).
MarkovChain full_chain(const Mdp& m, const Memoryless& sigma);

}  // namespace mopar
