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

#include "mopar/graph.hpp"

#include <algorithm>
#include <limits>

namespace mopar {

std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& adj) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  // explicit call stack of (vertex, next edge position)
  std::vector<std::pair<std::size_t, std::size_t>> calls;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    calls.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!calls.empty()) {
      auto& [v, pos] = calls.back();
      if (pos < adj[v].size()) {
        std::size_t w = adj[v][pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      calls.pop_back();
      if (!calls.empty()) low[calls.back().first] = std::min(low[calls.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

bool is_nontrivial(const Adjacency& adj, const std::vector<std::size_t>& component) {
  if (component.size() > 1) return true;
  if (component.empty()) return false;
  const std::size_t v = component.front();
  return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
}

std::vector<bool> forward_reachable(const Adjacency& adj, std::size_t from) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> todo{from};
  seen[from] = true;
  while (!todo.empty()) {
    auto v = todo.back();
    todo.pop_back();
    for (auto w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        todo.push_back(w);
      }
  }
  return seen;
}

}  // namespace mopar
