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
#include <string_view>
#include <utility>
#include <vector>

#include "mopar/rational.hpp"

namespace mopar {

inline constexpr std::string_view kSinkAction = "*";

// Successor index and probability, sorted by successor, no zero entries.
using Distribution = std::vector<std::pair<std::size_t, Rational>>;

struct Choice {
  std::size_t action;  // index into Mdp::actions
  Distribution dist;
};

struct Target {
  std::string name;
  std::vector<std::size_t> states;  // sorted
};

// Finite MDP with exact probabilities. Treat as immutable once returned by
// validate_mdp; all algorithms take it by const reference.
struct Mdp {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  // Enabled choices per state, sorted by action index.
  std::vector<std::vector<Choice>> enabled;
  std::vector<unsigned> priority;
  std::vector<Target> targets;
  std::optional<std::size_t> initial;

  std::size_t size() const { return states.size(); }
  std::size_t num_targets() const { return targets.size(); }

  std::optional<std::size_t> find_state(std::string_view name) const;
  std::optional<std::size_t> find_action(std::string_view name) const;
  // Throws ModelError(UnknownState).
  std::size_t state_index(std::string_view name) const;
  std::optional<std::size_t> find_target(std::string_view name) const;

  // Position of `action` in enabled[s], if enabled.
  std::optional<std::size_t> choice_index(std::size_t s, std::size_t action) const;

  bool is_sink(std::size_t s) const;
  // Membership of s in each F_i.
  std::vector<bool> target_flags(std::size_t s) const;
  // Indicator of the union F of all targets.
  std::vector<bool> target_union() const;
  std::size_t num_choices() const;
  std::size_t num_priorities() const;
};

// Checks all invariants and normalises every sink to the single action "*".
// Throws ModelError naming the offending element.
Mdp validate_mdp(Mdp raw);

// Largest sub-MDP whose states lie in `keep`. Unused actions stay in the
// action table so names and indices remain comparable with `m`. The initial
// state is dropped when it does not survive.
Mdp restrict(const Mdp& m, const std::vector<bool>& keep);

// Same as restrict but by state names.
Mdp restrict(const Mdp& m, const std::vector<std::string>& keep);

// States reachable from `from` along enabled actions.
std::vector<bool> reachable_states(const Mdp& m, std::size_t from);

// States with a path into `goal`.
std::vector<bool> can_reach(const Mdp& m, const std::vector<bool>& goal);

}  // namespace mopar
