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

#include "mopar/conj.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mopar/chain.hpp"
#include "mopar/errors.hpp"
#include "mopar/game.hpp"
#include "mopar/graph.hpp"
#include "mopar/moreach.hpp"

namespace mopar {

namespace {

using Mask = std::vector<bool>;
using Mode = std::vector<std::size_t>;

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// A closed sub-model: alive states and allowed choices. Target states are
// absorbing for the analysis and always stay alive.
struct Sub {
  Mask alive;
  std::vector<Mask> allowed;
};

struct Node {
  enum class Kind { Trivial, Odd, Even };
  Kind kind = Kind::Trivial;
  Mask targets;
  Mask region;
  // odd
  std::vector<std::size_t> layers;
  std::vector<Mask> layer_regions;
  std::vector<int> level;
  std::vector<std::size_t> transit;
  // even
  std::size_t child = kNone;
  Mask top;
  std::vector<std::size_t> rank;
  std::vector<std::size_t> plan;
};

class Solver {
 public:
  explicit Solver(const Mdp& m) : m_(m) {}

  Sub restrict_sub(const Sub& parent, const Mask& keep, const Mask& targets) const {
    const std::size_t n = m_.size();
    Sub out;
    out.alive.assign(n, false);
    out.allowed = parent.allowed;
    for (std::size_t s = 0; s < n; ++s) out.alive[s] = parent.alive[s] && keep[s];
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < n; ++s) {
        if (!out.alive[s] || targets[s]) continue;
        bool any = false;
        for (std::size_t k = 0; k < m_.enabled[s].size(); ++k) {
          if (!out.allowed[s][k]) continue;
          for (const auto& [t, w] : m_.enabled[s][k].dist)
            if (!out.alive[t]) {
              out.allowed[s][k] = false;
              break;
            }
          any = any || out.allowed[s][k];
        }
        if (!any) {
          out.alive[s] = false;
          changed = true;
        }
      }
    }
    return out;
  }

  bool support_within(std::size_t s, std::size_t k, const Mask& set) const {
    for (const auto& [t, w] : m_.enabled[s][k].dist)
      if (!set[t]) return false;
    return true;
  }

  std::size_t solve(const Sub& sub, const Mask& targets_in) {
    const std::size_t n = m_.size();
    Node node;
    node.targets.assign(n, false);
    for (std::size_t s = 0; s < n; ++s) node.targets[s] = targets_in[s] && sub.alive[s];
    bool any = false;
    unsigned d = 0;
    for (std::size_t s = 0; s < n; ++s)
      if (sub.alive[s] && !node.targets[s]) {
        d = any ? std::max(d, m_.priority[s]) : m_.priority[s];
        any = true;
      }
    if (!any) {
      node.region = sub.alive;
      return store(std::move(node));
    }
    Mask top(n, false);
    for (std::size_t s = 0; s < n; ++s) top[s] = sub.alive[s] && !node.targets[s] && m_.priority[s] == d;
    if (d % 2 == 1)
      solve_odd(sub, top, node);
    else
      solve_even(sub, top, node);
    return store(std::move(node));
  }

  // Next choice and mode at state s, which must be a non-target state of
  // the node's region.
  std::pair<std::size_t, Mode> step(std::size_t id, const Mode& mode, std::size_t s) const {
    const Node& node = nodes_[id];
    if (!node.region[s] || node.targets[s])
      throw CertificateFailure("conj: controller queried outside its region at " + m_.states[s]);
    if (node.kind == Node::Kind::Odd) {
      const int j = node.level[s];
      Mode child_mode;
      if (!mode.empty() && static_cast<int>(mode[0]) == j) child_mode.assign(mode.begin() + 1, mode.end());
      if (node.layer_regions[j][s] && !in_layer_targets(node, j, s)) {
        auto [k, next] = step(node.layers[j], child_mode, s);
        Mode out{static_cast<std::size_t>(j)};
        out.insert(out.end(), next.begin(), next.end());
        return {k, out};
      }
      return {node.transit[s], Mode{static_cast<std::size_t>(j)}};
    }
    if (node.kind == Node::Kind::Even) {
      if (!mode.empty() && mode[0] == 1 && node.rank[s] == mode[1])
        return {node.plan[s], Mode{1, node.rank[s] - 1}};
      if (node.top[s]) return {node.plan[s], Mode{1, node.rank[s] - 1}};
      Mode child_mode;
      if (!mode.empty() && mode[0] == 0) child_mode.assign(mode.begin() + 1, mode.end());
      auto [k, next] = step(node.child, child_mode, s);
      Mode out{0};
      out.insert(out.end(), next.begin(), next.end());
      return {k, out};
    }
    throw CertificateFailure("conj: trivial controller queried at " + m_.states[s]);
  }

  const Node& node(std::size_t id) const { return nodes_[id]; }

 private:
  std::size_t store(Node node) {
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
  }

  bool in_layer_targets(const Node& node, int j, std::size_t s) const {
    return nodes_[node.layers[j]].targets[s];
  }

  void solve_odd(const Sub& sub, const Mask& top, Node& node) {
    const std::size_t n = m_.size();
    node.kind = Node::Kind::Odd;
    node.level.assign(n, -1);
    node.transit.assign(n, kNone);

    Mask keep(n);
    for (std::size_t s = 0; s < n; ++s) keep[s] = !top[s];
    Mask layer_targets = node.targets;
    Mask covered = node.targets;  // E_{j-1}
    for (int j = 0;; ++j) {
      const Sub child_sub = restrict_sub(sub, keep, layer_targets);
      const std::size_t child = solve(child_sub, layer_targets);
      const Mask& t = nodes_[child].region;
      node.layers.push_back(child);
      node.layer_regions.push_back(t);
      Mask next = covered;
      for (std::size_t s = 0; s < n; ++s)
        if (t[s] && !covered[s]) {
          next[s] = true;
          node.level[s] = j;
        }
      for (std::size_t s = 0; s < n; ++s) {
        if (!top[s] || next[s]) continue;
        for (std::size_t k = 0; k < m_.enabled[s].size(); ++k)
          if (sub.allowed[s][k] && support_within(s, k, t)) {
            next[s] = true;
            node.level[s] = j;
            node.transit[s] = k;
            break;
          }
      }
      if (next == covered) break;
      covered = next;
      layer_targets = covered;
      for (std::size_t s = 0; s < n; ++s) keep[s] = !top[s] || covered[s];
    }
    node.region = covered;
  }

  void solve_even(const Sub& sub, const Mask& top, Node& node) {
    const std::size_t n = m_.size();
    node.kind = Node::Kind::Even;
    Mask z = sub.alive;
    for (;;) {
      const Sub zsub = restrict_sub(sub, z, node.targets);
      Mask child_targets(n, false);
      for (std::size_t s = 0; s < n; ++s) child_targets[s] = node.targets[s] || (top[s] && zsub.alive[s]);
      const std::size_t child = solve(zsub, child_targets);

      // positive-probability attractor of the targets inside zsub
      std::vector<std::size_t> rank(n, kNone), plan(n, kNone);
      std::vector<std::size_t> frontier;
      for (std::size_t s = 0; s < n; ++s)
        if (zsub.alive[s] && node.targets[s]) {
          rank[s] = 0;
          frontier.push_back(s);
        }
      for (std::size_t r = 1; !frontier.empty(); ++r) {
        Mask prev(n, false);
        for (auto s : frontier) prev[s] = true;
        frontier.clear();
        for (std::size_t s = 0; s < n; ++s) {
          if (!zsub.alive[s] || rank[s] != kNone) continue;
          for (std::size_t k = 0; k < m_.enabled[s].size() && plan[s] == kNone; ++k) {
            if (!zsub.allowed[s][k]) continue;
            for (const auto& [t, w] : m_.enabled[s][k].dist)
              if (prev[t]) {
                plan[s] = k;
                break;
              }
          }
          if (plan[s] != kNone) frontier.push_back(s);
        }
        for (auto s : frontier) rank[s] = r;
      }

      Mask next(n, false);
      for (std::size_t s = 0; s < n; ++s) next[s] = nodes_[child].region[s] && rank[s] != kNone;
      if (next == zsub.alive) {
        node.child = child;
        node.rank = std::move(rank);
        node.plan = std::move(plan);
        node.region = next;
        node.top.assign(n, false);
        for (std::size_t s = 0; s < n; ++s) node.top[s] = top[s] && next[s];
        return;
      }
      z = next;
    }
  }

  const Mdp& m_;
  std::vector<Node> nodes_;
};

}  // namespace

ConjResult conj_region(const Mdp& m) {
  const std::size_t n = m.size();
  Solver solver(m);
  Sub root;
  root.alive.assign(n, true);
  root.allowed.resize(n);
  for (std::size_t s = 0; s < n; ++s) root.allowed[s].assign(m.enabled[s].size(), true);
  const Mask f = m.target_union();
  Mask targets(n, false);
  for (std::size_t s = 0; s < n; ++s) targets[s] = f[s] && m.is_sink(s) && m.priority[s] % 2 == 0;
  const std::size_t id = solver.solve(root, targets);

  ConjResult out;
  out.states = solver.node(id).region;

  // compile the hierarchical controller into an explicit machine
  std::map<Mode, std::size_t> mode_id;
  mode_id[Mode{}] = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<Mode, std::size_t>> todo;
  for (std::size_t s = 0; s < n; ++s)
    if (out.states[s] && !targets[s]) todo.emplace_back(Mode{}, s);
  while (!todo.empty()) {
    auto [mode, s] = todo.back();
    todo.pop_back();
    const std::size_t q = mode_id.at(mode);
    if (!seen.insert({q, s}).second) continue;
    auto [k, next] = solver.step(id, mode, s);
    auto [it, fresh] = mode_id.emplace(next, mode_id.size());
    const std::size_t qn = it->second;
    out.strategy.rules[{q, m.states[s]}] = FsmRule{qn, {{m.actions[m.enabled[s][k].action], Rational(1)}}};
    for (const auto& [t, w] : m.enabled[s][k].dist) {
      if (!out.states[t]) throw CertificateFailure("conj: controller leaves its region at " + m.states[s]);
      if (!targets[t]) todo.emplace_back(next, t);
    }
  }
  out.strategy.modes = mode_id.size();
  out.strategy.initial = 0;

  const Strategy sigma(out.strategy);
  for (std::size_t s = 0; s < n; ++s) {
    if (!out.states[s]) continue;
    const MarkovChain c = induce(m, sigma, s);
    if (!sure_parity_on_chain(c))
      throw CertificateFailure("conj: witness violates sure parity from " + m.states[s]);
    if (reach_probability(c, c.target_union())[c.initial] != 1)
      throw CertificateFailure("conj: witness misses the targets from " + m.states[s]);
  }
  return out;
}

std::size_t oracle_memory_bound(const Mdp& m) {
  return std::min<std::size_t>(2 * m.num_choices() * m.num_priorities(), 6);
}

namespace {

Mask good_sinks(const Mdp& x) {
  const Mask f = x.target_union();
  Mask good(x.size(), false);
  for (std::size_t s = 0; s < x.size(); ++s) good[s] = f[s] && x.is_sink(s) && x.priority[s] % 2 == 0;
  return good;
}

// Greatest sub-model that can contain a winning strategy's visited states.
// Every visited state surely satisfies parity and reaches a good sink almost
// surely. If the largest priority d is odd, no cycle of a winning strategy
// passes a d-state, so some d-state must exit with its whole support into a
// sub-model free of d-states; without such an exit the d-states go.
Mdp necessary_region(Mdp cur) {
  while (cur.size() > 0) {
    const Mask par = sure_parity_region(cur).states;
    const Vector val = max_reach_values(cur, good_sinks(cur)).values;
    Mask keep(cur.size());
    bool all = true;
    for (std::size_t s = 0; s < cur.size(); ++s) {
      keep[s] = par[s] && val[s] == 1;
      all = all && keep[s];
    }
    if (!all) {
      cur = restrict(cur, keep);
      continue;
    }
    const Mask good = good_sinks(cur);
    bool any = false;
    unsigned d = 0;
    for (std::size_t s = 0; s < cur.size(); ++s)
      if (!good[s]) {
        d = any ? std::max(d, cur.priority[s]) : cur.priority[s];
        any = true;
      }
    if (!any || d % 2 == 0) break;
    Mask rest(cur.size());
    for (std::size_t s = 0; s < cur.size(); ++s) rest[s] = good[s] || cur.priority[s] != d;
    const Mdp inner = necessary_region(restrict(cur, rest));
    bool exit = false;
    for (std::size_t s = 0; s < cur.size() && !exit; ++s) {
      if (rest[s]) continue;
      for (const auto& c : cur.enabled[s]) {
        bool inside = true;
        for (const auto& [t, w] : c.dist) inside = inside && inner.find_state(cur.states[t]).has_value();
        if (inside) {
          exit = true;
          break;
        }
      }
    }
    if (exit) break;
    cur = restrict(cur, rest);
  }
  return cur;
}

// Depth-first search over pure strategies with a fixed number of modes.
class PureSearch {
 public:
  PureSearch(const Mdp& m, std::size_t modes, const Mask& good_sink, const Mask& bad_sink, std::size_t& steps)
      : m_(m), modes_(modes), good_(good_sink), bad_(bad_sink), steps_(steps) {
    const std::size_t total = m.size() * modes;
    choice_.assign(total, kNone);
    next_.assign(total, kNone);
  }

  // On success returns the model states visited by the found strategy.
  std::optional<Mask> run(std::size_t s0) {
    const std::size_t start = s0 * modes_;
    if (bad_[s0]) return std::nullopt;
    if (good_[s0]) return Mask(m_.size(), false);
    if (search(start, 0)) {
      Mask visited(m_.size(), false);
      for (auto v : reach_from(start)) visited[v / modes_] = true;
      return visited;
    }
    return std::nullopt;
  }

 private:
  std::size_t state(std::size_t v) const { return v / modes_; }

  std::vector<std::size_t> successors(std::size_t v) const {
    std::vector<std::size_t> out;
    const std::size_t s = state(v);
    for (const auto& [t, w] : m_.enabled[s][choice_[v]].dist) out.push_back(t * modes_ + next_[v]);
    return out;
  }

  bool terminal(std::size_t v) const { return good_[state(v)] || bad_[state(v)]; }

  std::vector<std::size_t> reach_from(std::size_t start) const {
    std::vector<std::size_t> order{start};
    std::set<std::size_t> seen{start};
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t v = order[i];
      if (terminal(v) || choice_[v] == kNone) continue;
      for (auto w : successors(v))
        if (seen.insert(w).second) order.push_back(w);
    }
    return order;
  }

  // Partial-assignment check: false if some reachable assigned region is
  // already doomed.
  bool viable(const std::vector<std::size_t>& nodes) const {
    const std::size_t total = choice_.size();
    Adjacency adj(total);
    for (auto v : nodes) {
      if (bad_[state(v)]) return false;
      if (terminal(v) || choice_[v] == kNone) continue;
      adj[v] = successors(v);
    }
    // odd-max cycle among assigned nodes
    std::set<unsigned> odd;
    for (auto v : nodes)
      if (m_.priority[state(v)] % 2 == 1) odd.insert(m_.priority[state(v)]);
    for (unsigned d : odd) {
      Adjacency sub(total);
      for (auto v : nodes) {
        if (m_.priority[state(v)] > d) continue;
        for (auto w : adj[v])
          if (m_.priority[state(w)] <= d) sub[v].push_back(w);
      }
      for (const auto& comp : strongly_connected_components(sub)) {
        if (!is_nontrivial(sub, comp)) continue;
        for (auto v : comp)
          if (m_.priority[state(v)] == d) return false;
      }
    }
    // every assigned node must still be able to reach a good sink or an
    // unassigned node
    Adjacency pred(total);
    for (auto v : nodes)
      for (auto w : adj[v]) pred[w].push_back(v);
    Mask ok(total, false);
    std::vector<std::size_t> todo;
    for (auto v : nodes)
      if (good_[state(v)] || choice_[v] == kNone) {
        ok[v] = true;
        todo.push_back(v);
      }
    while (!todo.empty()) {
      auto w = todo.back();
      todo.pop_back();
      for (auto v : pred[w])
        if (!ok[v]) {
          ok[v] = true;
          todo.push_back(v);
        }
    }
    for (auto v : nodes)
      if (!ok[v]) return false;
    return true;
  }

  bool search(std::size_t start, std::size_t used) {
    if (steps_ == 0) throw BudgetExceeded("brute-force search ran out of steps");
    --steps_;
    const auto nodes = reach_from(start);
    if (!viable(nodes)) return false;
    std::size_t open = kNone;
    for (auto v : nodes)
      if (!terminal(v) && choice_[v] == kNone) {
        open = v;
        break;
      }
    if (open == kNone) return true;
    const std::size_t s = state(open);
    const auto& choices = m_.enabled[s];
    for (std::size_t k = 0; k < choices.size(); ++k) {
      // Two actions with the same distribution lead to the same product graph.
      bool repeat = false;
      for (std::size_t j = 0; j < k && !repeat; ++j) repeat = choices[j].dist == choices[k].dist;
      if (repeat) continue;
      // The next mode is never read when every successor is a sink.
      bool into_sinks = true;
      for (const auto& [t, w] : choices[k].dist) into_sinks = into_sinks && terminal(t * modes_);
      const std::size_t limit = into_sinks ? 1 : std::min(modes_, used + 2);
      for (std::size_t q = 0; q < limit; ++q) {
        choice_[open] = k;
        next_[open] = q;
        if (search(start, std::max(used, q))) return true;
      }
    }
    choice_[open] = kNone;
    next_[open] = kNone;
    return false;
  }

  const Mdp& m_;
  std::size_t modes_;
  const Mask& good_;
  const Mask& bad_;
  std::size_t& steps_;
  std::vector<std::size_t> choice_, next_;
};

}  // namespace

std::vector<bool> brute_force_conj(const Mdp& m, std::size_t memory_bound, std::size_t budget) {
  const std::size_t cost = m.size() * std::max<std::size_t>(m.actions.size(), 1) * memory_bound;
  if (cost > budget)
    throw BudgetExceeded("brute-force search needs " + std::to_string(cost) + " > budget " +
                         std::to_string(budget));
  const Mdp cur = necessary_region(m);
  const std::size_t n = cur.size();
  const Mask good = good_sinks(cur);
  // A state proven losing stays losing for any node that visits it: the rest
  // of a winning strategy from such a node would win from the state with no
  // more modes. So losers become bad sinks for the later searches.
  Mask bad(n, false);
  Mask accepted = good;
  std::size_t steps = kOracleSearchSteps;
  for (std::size_t s0 = 0; s0 < n; ++s0) {
    if (accepted[s0]) continue;
    bool won = false;
    for (std::size_t modes = 1; modes <= memory_bound && !won; ++modes) {
      PureSearch search(cur, modes, good, bad, steps);
      if (auto visited = search.run(s0)) {
        for (std::size_t s = 0; s < n; ++s)
          if ((*visited)[s]) accepted[s] = true;
        accepted[s0] = true;
        won = true;
      }
    }
    bad[s0] = !won;
  }
  Mask out(m.size(), false);
  for (std::size_t s = 0; s < n; ++s)
    if (accepted[s]) out[m.state_index(cur.states[s])] = true;
  return out;
}

}  // namespace mopar
