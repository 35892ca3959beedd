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
#include <vector>

#include "mopar/mdp.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

// Vertices 0..|S|-1 belong to the controller (player 0, one per state); the
// remaining vertices belong to the adversary (player 1, one per enabled
// state-action pair) and inherit the priority of their source state.
struct TurnBasedGame {
  std::vector<int> owner;
  std::vector<unsigned> priority;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<bool> fair;
  // For adversary vertices: source state and enabled-choice index.
  std::vector<std::size_t> source;
  std::vector<std::size_t> choice;
  std::size_t num_controller = 0;

  std::size_t size() const { return owner.size(); }
};

TurnBasedGame build_game(const Mdp& m);

struct WinningRegions {
  std::vector<bool> even;  // player 0
  std::vector<bool> odd;   // player 1
  // Successor chosen at each owned vertex of the respective region, or
  // kNoMove elsewhere.
  std::vector<std::size_t> strategy_even;
  std::vector<std::size_t> strategy_odd;
};

inline constexpr std::size_t kNoMove = static_cast<std::size_t>(-1);

WinningRegions zielonka(const TurnBasedGame& g);

struct ParityRegion {
  std::vector<bool> states;
  Memoryless strategy;  // deterministic, defined on the region
};

// States from which the parity objective can be satisfied surely, with a
// memoryless deterministic winning strategy (re-checked on induced chains).
ParityRegion sure_parity_region(const Mdp& m);

Mdp clean_wrt_parity(const Mdp& m);

}  // namespace mopar
