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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mopar/pareto.hpp"
#include "mopar/pipeline.hpp"
#include "mopar/text_format.hpp"
#include "mopar/verify.hpp"

namespace mopar::tools {

inline constexpr const char* kReportSchema = "mopar.report/1";

struct StrategySummary {
  std::string kind;
  Integer memory;
  std::optional<Integer> horizon;  // outermost stitched horizon
  std::size_t memory_bound = 0;    // 2 * |choices| * |priorities|
  bool exceeds_bound = false;
};

struct OracleComparison {
  std::size_t memory_bound = 0;
  std::vector<std::string> conj_region;
  std::vector<std::string> brute_force;
  std::optional<bool> agree;  // unset when the oracle could not run
  std::string error;
};

struct SimulationSummary {
  std::uint64_t episodes = 0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> hits;
};

struct Report {
  std::string command;
  std::string model;
  std::string start;
  std::string query_text;
  std::optional<Query> query;
  std::vector<std::string> targets;
  std::vector<std::string> parity_removed;
  std::string verdict;  // yes, no, frontier, pass, fail, simulated
  std::optional<Vector> achieved;
  bool achieved_is_lower_bound = false;
  std::optional<Vector> optimum;
  std::vector<std::string> optimum_targets;
  std::optional<StrategySummary> strategy;
  std::optional<VerificationRecord> verification;
  std::vector<TraceStep> trace;
  std::optional<Polytope> frontier;
  std::optional<OracleComparison> oracle;
  std::optional<SimulationSummary> simulation;
  std::vector<std::string> notes;
  double elapsed_ms = 0;
};

StrategySummary summarize(const Strategy& s, const Mdp& m);

nlohmann::ordered_json to_json(const Report& r);
void write_text(std::ostream& out, const Report& r);

// Header line of target names, then one "x1,...,xn" line per corner of the
// upper boundary (Polytope::pure_points).
std::string frontier_csv(const Polytope& p, const std::vector<std::string>& targets);
// Downward closure of the vertices in [0,1]^2; requires dim == 2.
std::string frontier_svg(const Polytope& p, const std::vector<std::string>& targets);

}  // namespace mopar::tools
