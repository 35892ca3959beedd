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
#include <vector>

#include "mopar/chain.hpp"
#include "mopar/mdp.hpp"
#include "mopar/moreach.hpp"
#include "mopar/pareto.hpp"
#include "mopar/strategy.hpp"
#include "mopar/verify.hpp"

namespace mopar {

struct TraceStep {
  enum class Kind { Clean, Achievable, Project, Prune, Frontier, VertexCase, InteriorCase, Witness, Note };
  Kind kind = Kind::Note;
  std::string summary;
  std::optional<Vector> direction;
  std::vector<std::string> states;  // removed states for Prune
  std::vector<Vector> points;       // frontier vertices
};

const char* to_string(TraceStep::Kind k);

struct Verdict {
  bool yes = false;
  std::optional<Strategy> witness;
  // Exact reach vector of the witness, indexed by target. Missing when the
  // witness could only be checked in certified mode.
  std::optional<Vector> achieved;
  // Lexicographic optimum in query order.
  std::optional<Vector> optimum;
  std::optional<VerificationRecord> record;
  std::vector<TraceStep> trace;
};

struct PipelineOptions {
  Integer materialize_cap = kDefaultMaterializeCap;
};

// Projection on direction v, in two forms. `projected` is the
// rescaled model with the fresh sink (priority 0, in no target) and only the
// v-optimal actions; `restricted` keeps the original probabilities and
// targets but drops the same actions. Later pruning runs on `restricted`.
struct Projection {
  Mdp projected;
  Mdp restricted;
  std::string bottom;
  Vector values;  // optimal v-weighted reach value per state of the input
  std::vector<std::pair<std::string, std::string>> removed;  // (state, action)
};

Projection project(const Mdp& m, const Vector& v);

// Throws NotClean(Parity) or NotClean(Targets) with the offending states.
void require_clean(const Mdp& m);

Verdict decide_strict(const Mdp& m, const Thresholds& p, std::size_t s0, const PipelineOptions& opt = {});

// Targets are model target indices in priority order. On yes the optimum is
// reported in the same order.
Verdict lex_optimize(const Mdp& m, const std::vector<std::size_t>& order, std::size_t s0,
                     const PipelineOptions& opt = {});

// p must be a vertex of frontier(m, s0); throws GeometryError(NotAVertex).
Verdict vertex_case(const Mdp& m, const Vector& p, std::size_t s0, const PipelineOptions& opt = {});

// m_pruned: every state satisfies sure parity and reaches the targets almost
// surely. Throws GeometryError(NotRelativelyInterior) unless x lies in the
// relative interior of the frontier's vertex set.
Strategy interior_case(const Mdp& m_pruned, const Vector& x, std::size_t s0, const PipelineOptions& opt = {});

// Unconstrained targets count as threshold 0.
Verdict decide_nonstrict(const Mdp& m, const Thresholds& p, std::size_t s0, const PipelineOptions& opt = {});

}  // namespace mopar
