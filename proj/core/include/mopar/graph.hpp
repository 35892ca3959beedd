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

namespace mopar {

using Adjacency = std::vector<std::vector<std::size_t>>;

// Tarjan's algorithm. Components come out in reverse topological order:
// every edge leaving a component points into an earlier one.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& adj);

// True iff the component has an internal edge (size > 1 or a self-loop).
bool is_nontrivial(const Adjacency& adj, const std::vector<std::size_t>& component);

std::vector<bool> forward_reachable(const Adjacency& adj, std::size_t from);

}  // namespace mopar
