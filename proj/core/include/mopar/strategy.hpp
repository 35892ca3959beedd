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
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mopar/mdp.hpp"
#include "mopar/rational.hpp"

namespace mopar {

// Action name and weight; weights positive and summing to 1.
using ActionDist = std::vector<std::pair<std::string, Rational>>;

// Strategies are keyed by state and action names so they stay meaningful on
// restrictions and projections of a model. States without an entry that are
// sinks implicitly play "*".
struct Memoryless {
  std::map<std::string, ActionDist> choice;
};

struct FsmRule {
  std::size_t next = 0;
  ActionDist out;
};

// Mode update is decided on the current state, before the successor is known.
struct Fsm {
  std::size_t modes = 1;
  std::size_t initial = 0;
  std::map<std::pair<std::size_t, std::string>, FsmRule> rules;
};

struct Strategy;

// Plays `first` for `horizon` steps, then `second` (memoryless or Fsm,
// started in its initial mode) forever.
struct Stitched {
  Memoryless first;
  Integer horizon;
  std::shared_ptr<const Strategy> second;
};

struct Mixture {
  std::vector<std::pair<Rational, std::shared_ptr<const Strategy>>> parts;
};

struct Strategy {
  std::variant<Memoryless, Fsm, Stitched, Mixture> v;

  Strategy() = default;
  Strategy(Memoryless m) : v(std::move(m)) {}
  Strategy(Fsm f) : v(std::move(f)) {}
  Strategy(Stitched s) : v(std::move(s)) {}
  Strategy(Mixture m) : v(std::move(m)) {}

  const char* kind() const;
};

bool operator==(const Memoryless& a, const Memoryless& b);
bool operator==(const FsmRule& a, const FsmRule& b);
bool operator==(const Fsm& a, const Fsm& b);
bool operator==(const Stitched& a, const Stitched& b);
bool operator==(const Mixture& a, const Mixture& b);
bool operator==(const Strategy& a, const Strategy& b);

Memoryless deterministic(std::vector<std::pair<std::string, std::string>> picks);

// Memory modes used by the strategy: 1 for memoryless, the mode count for an
// Fsm, horizon + modes of the second part for Stitched, the sum for Mixture.
Integer memory_size(const Strategy& s);

// Throws StrategyError when an output names an action that is not enabled,
// a weight is non-positive or a distribution does not sum to 1.
void check_strategy(const Mdp& m, const Strategy& s);

// Distribution over enabled-choice indices at state s, or empty if the
// strategy has no entry there (sinks resolve to "*").
std::vector<std::pair<std::size_t, Rational>> resolve(const Mdp& m, std::size_t s, const ActionDist* d);

std::shared_ptr<const Strategy> share(Strategy s);

}  // namespace mopar
