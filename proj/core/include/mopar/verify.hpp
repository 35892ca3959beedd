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

#include "mopar/chain.hpp"
#include "mopar/mdp.hpp"
#include "mopar/moreach.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

struct Requirement {
  bool sure_parity = true;
  Thresholds thresholds;  // empty: no probability checks
  bool strict = false;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Outcome of checking a strategy against a requirement from scratch, using
// only the model and the strategy.
struct VerificationRecord {
  std::vector<Check> checks;
  bool all_pass = false;
  // Set when some stitched horizon exceeds the materialisation cap; reach
  // values are then lower bounds from the hitting-time inequality.
  bool certified_mode = false;
  bool exact = false;
  Vector reach;  // exact reach vector, or lower bounds in certified mode
  Integer memory;
};

VerificationRecord verify_strategy(const Mdp& m, const Strategy& sigma, std::size_t s0, const Requirement& req,
                                   const Integer& cap = kDefaultMaterializeCap);

// Model states occupied after exactly `steps` steps under a memoryless
// strategy, computed on sets with cycle detection so huge step counts are
// cheap.
std::vector<bool> states_after(const Mdp& m, const Memoryless& sigma, std::size_t s0, const Integer& steps);

}  // namespace mopar
