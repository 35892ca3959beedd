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

#include "mopar/mdp.hpp"
#include "mopar/moreach.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

// Model files are line based:
//
//   targets <name>...                      (optional, fixes target order)
//   state <id> priority <nat>
//   sink <id> priority <nat> [target <name>...]
//   init <id>
//   act <state> <action> <succ>:<rational> ...
//
// '#' starts a comment. Probabilities are "a/b", integers or terminating
// decimals. Throws SyntaxError for malformed text and ModelError (via
// validate_mdp) for semantic problems.
Mdp parse_mdp(std::string_view text);
std::string print_mdp(const Mdp& m);

struct Query {
  enum class Mode { Strict, NonStrict, Lex, Frontier };
  Mode mode = Mode::NonStrict;
  bool parity = false;
  std::vector<std::pair<std::string, Rational>> thresholds;  // in query order
  std::vector<std::string> order;                            // Lex only
};

const char* to_string(Query::Mode mode);

// Grammar:
//   SURE parity [AND P>p [T] AND ...]     all comparisons '>' or all '>='
//   [SURE parity AND] P>=p [T] AND ...
//   SURE parity LEXMAX [T1, T2, ...]
//   FRONTIER
Query parse_query(std::string_view text);
std::string print_query(const Query& q);

// Thresholds indexed by model target; throws QueryError(UnknownTarget).
Thresholds resolve_thresholds(const Query& q, const Mdp& m);
std::vector<std::size_t> resolve_order(const Query& q, const Mdp& m);

// Self-describing strategy text ("strategy v1" header, one block per
// component) and its exact inverse.
std::string export_strategy(const Strategy& s);
Strategy import_strategy(std::string_view text);

}  // namespace mopar
