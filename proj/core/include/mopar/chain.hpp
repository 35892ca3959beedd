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
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mopar/graph.hpp"
#include "mopar/mdp.hpp"
#include "mopar/rational.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

inline constexpr std::size_t kNoOrigin = std::numeric_limits<std::size_t>::max();

struct MarkovChain {
  std::vector<std::string> labels;
  std::vector<std::size_t> origin;  // underlying model state
  std::vector<Distribution> trans;
  std::size_t initial = 0;
  std::vector<unsigned> priority;
  std::vector<std::vector<bool>> target_flags;  // [state][target]
  std::size_t num_targets = 0;

  std::size_t size() const { return trans.size(); }
  std::vector<bool> target_set(std::size_t i) const;
  std::vector<bool> target_union() const;
  Adjacency adjacency() const;
};

inline const Integer kDefaultMaterializeCap = 100000;

// Product of the model with the strategy, trimmed to states reachable from
// `start`. Stitched counters are materialised only when horizon <= cap;
// otherwise MaterializationCapExceeded is thrown.
MarkovChain induce(const Mdp& m, const Strategy& sigma, std::size_t start,
                   const Integer& cap = kDefaultMaterializeCap);
// Starts from the model's initial state.
MarkovChain induce(const Mdp& m, const Strategy& sigma);

// Pr_s(<> goal) for every chain state.
Vector reach_probability(const MarkovChain& c, const std::vector<bool>& goal);
Vector reach_probability(const MarkovChain& c, std::size_t target_index);

// Reach probability of every target from the initial state.
Vector reach_vector(const MarkovChain& c);

// E_s of the hitting time of `goal`, counted as 0 on paths that never hit it.
Vector expected_hitting_time(const MarkovChain& c, const std::vector<bool>& goal);

// Pr(<>^{<=steps} goal) from the initial state by transient analysis.
Rational bounded_reach(const MarkovChain& c, const std::vector<bool>& goal, std::size_t steps);

// A reachable cycle whose maximum priority is odd, if any.
std::optional<std::vector<std::size_t>> find_odd_cycle(const MarkovChain& c);
bool sure_parity_on_chain(const MarkovChain& c);

struct SimulationResult {
  std::uint64_t episodes = 0;
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> hits;
  std::vector<double> frequency;
};

// Monte Carlo estimate of bounded reachability; deterministic given the seed.
SimulationResult simulate(const MarkovChain& c, std::uint64_t episodes, std::uint64_t horizon,
                          std::uint64_t seed);

}  // namespace mopar
