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

#include "mopar/chain.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "mopar/errors.hpp"
#include "mopar/linalg.hpp"

namespace mopar {

std::vector<bool> MarkovChain::target_set(std::size_t i) const {
  std::vector<bool> out(size(), false);
  for (std::size_t s = 0; s < size(); ++s) out[s] = target_flags[s][i];
  return out;
}

std::vector<bool> MarkovChain::target_union() const {
  std::vector<bool> out(size(), false);
  for (std::size_t s = 0; s < size(); ++s)
    for (bool f : target_flags[s]) out[s] = out[s] || f;
  return out;
}

Adjacency MarkovChain::adjacency() const {
  Adjacency adj(size());
  for (std::size_t s = 0; s < size(); ++s)
    for (const auto& [t, w] : trans[s]) adj[s].push_back(t);
  return adj;
}

namespace {

// Lazily explores the product of a model with a (possibly nested) strategy.
class Builder {
 public:
  Builder(const Mdp& m, const Integer& cap, MarkovChain& c) : m_(m), cap_(cap), c_(c) {}

  std::size_t add_component(const Strategy& s, std::string prefix) {
    const std::size_t id = comps_.size();
    comps_.push_back({&s, std::move(prefix), 0, {}, {}, 0});
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stitched>) {
            if (x.horizon > cap_)
              throw MaterializationCapExceeded("stitched horizon " + to_string(x.horizon) +
                                               " exceeds the materialisation cap " + to_string(cap_));
            comps_[id].horizon = x.horizon.get_ui();
            if (!x.second) throw StrategyError("", "stitched strategy without second part");
            const std::size_t second = add_component(*x.second, comps_[id].prefix + "after/");
            comps_[id].second = second;
          } else if constexpr (std::is_same_v<T, Mixture>) {
            std::vector<std::size_t> parts;
            for (std::size_t j = 0; j < x.parts.size(); ++j)
              parts.push_back(add_component(*x.parts[j].second,
                                            comps_[id].prefix + "m" + std::to_string(j) + "/"));
            comps_[id].parts = std::move(parts);
          }
        },
        s.v);
    return id;
  }

  std::size_t entry(std::size_t comp, std::size_t s) {
    const Strategy& st = *comps_[comp].strategy;
    if (const auto* f = std::get_if<Fsm>(&st.v)) return node(comp, s, f->initial);
    if (std::holds_alternative<Stitched>(st.v) && comps_[comp].horizon == 0)
      return entry(comps_[comp].second, s);
    return node(comp, s, 0);
  }

  void run() {
    while (!queue_.empty()) {
      auto idx = queue_.front();
      queue_.pop_front();
      expand(idx);
    }
  }

 private:
  struct Comp {
    const Strategy* strategy;
    std::string prefix;
    std::size_t second;
    std::vector<std::size_t> parts;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::size_t horizon;
  };
  struct Node {
    std::size_t comp, state, aux;
  };

  std::size_t node(std::size_t comp, std::size_t s, std::size_t aux) {
    auto& memo = comps_[comp].memo;
    if (auto it = memo.find({s, aux}); it != memo.end()) return it->second;
    const std::size_t idx = c_.trans.size();
    memo[{s, aux}] = idx;
    const Strategy& st = *comps_[comp].strategy;
    std::string label = comps_[comp].prefix + m_.states[s];
    if (std::holds_alternative<Fsm>(st.v)) label += "#" + std::to_string(aux);
    if (std::holds_alternative<Stitched>(st.v)) label += "@" + std::to_string(aux);
    if (std::holds_alternative<Mixture>(st.v)) label = comps_[comp].prefix + "mix";
    c_.labels.push_back(std::move(label));
    c_.origin.push_back(s);
    c_.trans.emplace_back();
    c_.priority.push_back(m_.priority[s]);
    if (std::holds_alternative<Mixture>(st.v))
      c_.target_flags.emplace_back(m_.num_targets(), false);
    else
      c_.target_flags.push_back(m_.target_flags(s));
    nodes_.push_back({comp, s, aux});
    queue_.push_back(idx);
    return idx;
  }

  static const ActionDist* lookup(const Memoryless& x, const std::string& name) {
    auto it = x.choice.find(name);
    return it == x.choice.end() ? nullptr : &it->second;
  }

  template <typename Next>
  void play(std::size_t idx, std::size_t s, const std::vector<std::pair<std::size_t, Rational>>& dist,
            Next next) {
    std::map<std::size_t, Rational> row;
    for (const auto& [k, w] : dist)
      for (const auto& [t, p] : m_.enabled[s][k].dist) row[next(t)] += w * p;
    Distribution out(row.begin(), row.end());
    c_.trans[idx] = std::move(out);
  }

  void expand(std::size_t idx) {
    const Node nd = nodes_[idx];
    const Strategy& st = *comps_[nd.comp].strategy;
    const std::size_t s = nd.state;
    if (const auto* x = std::get_if<Memoryless>(&st.v)) {
      play(idx, s, resolve(m_, s, lookup(*x, m_.states[s])),
           [&](std::size_t t) { return node(nd.comp, t, 0); });
    } else if (const auto* f = std::get_if<Fsm>(&st.v)) {
      auto it = f->rules.find({nd.aux, m_.states[s]});
      if (it == f->rules.end()) {
        play(idx, s, resolve(m_, s, nullptr), [&](std::size_t t) { return node(nd.comp, t, nd.aux); });
      } else {
        const std::size_t next = it->second.next;
        play(idx, s, resolve(m_, s, &it->second.out),
             [&](std::size_t t) { return node(nd.comp, t, next); });
      }
    } else if (const auto* h = std::get_if<Stitched>(&st.v)) {
      const std::size_t k = nd.aux;
      const std::size_t horizon = comps_[nd.comp].horizon;
      const std::size_t second = comps_[nd.comp].second;
      play(idx, s, resolve(m_, s, lookup(h->first, m_.states[s])), [&](std::size_t t) {
        return k + 1 < horizon ? node(nd.comp, t, k + 1) : entry(second, t);
      });
    } else {
      const auto& mix = std::get<Mixture>(st.v);
      std::map<std::size_t, Rational> row;
      for (std::size_t j = 0; j < mix.parts.size(); ++j) row[entry(comps_[nd.comp].parts[j], s)] += mix.parts[j].first;
      c_.trans[idx] = Distribution(row.begin(), row.end());
    }
  }

  const Mdp& m_;
  const Integer& cap_;
  MarkovChain& c_;
  std::vector<Comp> comps_;
  std::vector<Node> nodes_;
  std::deque<std::size_t> queue_;
};

}  // namespace

MarkovChain induce(const Mdp& m, const Strategy& sigma, std::size_t start, const Integer& cap) {
  if (start >= m.size()) throw ModelError(ModelError::Kind::UnknownState, "", "start state out of range");
  check_strategy(m, sigma);
  MarkovChain c;
  c.num_targets = m.num_targets();
  Builder b(m, cap, c);
  const std::size_t root = b.add_component(sigma, "");
  c.initial = b.entry(root, start);
  b.run();
  return c;
}

MarkovChain induce(const Mdp& m, const Strategy& sigma) {
  if (!m.initial) throw ModelError(ModelError::Kind::UnknownState, "init", "model has no initial state");
  return induce(m, sigma, *m.initial);
}

namespace {

std::vector<bool> can_reach_chain(const MarkovChain& c, const std::vector<bool>& goal) {
  Adjacency pred(c.size());
  for (std::size_t s = 0; s < c.size(); ++s)
    for (const auto& [t, w] : c.trans[s]) pred[t].push_back(s);
  std::vector<bool> seen = goal;
  std::vector<std::size_t> todo;
  for (std::size_t s = 0; s < c.size(); ++s)
    if (goal[s]) todo.push_back(s);
  while (!todo.empty()) {
    auto t = todo.back();
    todo.pop_back();
    for (auto s : pred[t])
      if (!seen[s]) {
        seen[s] = true;
        todo.push_back(s);
      }
  }
  return seen;
}

// Solves x_s = base_s + sum_{s'} P(s,s') x_{s'} on `active` states, with x
// fixed to `fixed` elsewhere. The active part must be transient; components
// are solved in reverse topological order.
Vector solve_transient(const MarkovChain& c, const std::vector<bool>& active, const Vector& base,
                       const Vector& fixed) {
  Vector x = fixed;
  Adjacency adj(c.size());
  for (std::size_t s = 0; s < c.size(); ++s)
    if (active[s])
      for (const auto& [t, w] : c.trans[s])
        if (active[t]) adj[s].push_back(t);
  std::vector<std::size_t> pos(c.size(), 0);
  for (const auto& comp : strongly_connected_components(adj)) {
    if (!active[comp.front()]) continue;
    const std::size_t k = comp.size();
    for (std::size_t i = 0; i < k; ++i) pos[comp[i]] = i;
    std::vector<bool> inside(c.size(), false);
    for (auto s : comp) inside[s] = true;
    Matrix a(k, Vector(k, Rational(0)));
    Vector b(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t s = comp[i];
      a[i][i] = 1;
      b[i] = base[s];
      for (const auto& [t, w] : c.trans[s]) {
        if (inside[t])
          a[i][pos[t]] -= w;
        else
          b[i] += w * x[t];
      }
    }
    Vector sol = k == 1 ? Vector{b[0] / a[0][0]} : solve_linear_system(std::move(a), std::move(b));
    for (std::size_t i = 0; i < k; ++i) x[comp[i]] = sol[i];
  }
  return x;
}

}  // namespace

Vector reach_probability(const MarkovChain& c, const std::vector<bool>& goal) {
  const auto good = can_reach_chain(c, goal);
  std::vector<bool> active(c.size(), false);
  Vector fixed(c.size(), Rational(0));
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (goal[s])
      fixed[s] = 1;
    else if (good[s])
      active[s] = true;
  }
  return solve_transient(c, active, Vector(c.size(), Rational(0)), fixed);
}

Vector reach_probability(const MarkovChain& c, std::size_t target_index) {
  return reach_probability(c, c.target_set(target_index));
}

Vector reach_vector(const MarkovChain& c) {
  Vector out(c.num_targets);
  for (std::size_t i = 0; i < c.num_targets; ++i) out[i] = reach_probability(c, i)[c.initial];
  return out;
}

Vector expected_hitting_time(const MarkovChain& c, const std::vector<bool>& goal) {
  const Vector pr = reach_probability(c, goal);
  std::vector<bool> active(c.size(), false);
  for (std::size_t s = 0; s < c.size(); ++s) active[s] = !goal[s] && sgn(pr[s]) > 0;
  return solve_transient(c, active, pr, Vector(c.size(), Rational(0)));
}

Rational bounded_reach(const MarkovChain& c, const std::vector<bool>& goal, std::size_t steps) {
  Vector v(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) v[s] = goal[s] ? 1 : 0;
  for (std::size_t k = 0; k < steps; ++k) {
    Vector next(c.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
      if (goal[s]) {
        next[s] = 1;
        continue;
      }
      Rational acc = 0;
      for (const auto& [t, w] : c.trans[s])
        if (sgn(v[t]) != 0) acc += w * v[t];
      next[s] = acc;
    }
    if (next == v) break;
    v = std::move(next);
  }
  return v[c.initial];
}

std::optional<std::vector<std::size_t>> find_odd_cycle(const MarkovChain& c) {
  const Adjacency full = c.adjacency();
  const auto reach = forward_reachable(full, c.initial);
  std::set<unsigned> odd;
  for (std::size_t s = 0; s < c.size(); ++s)
    if (reach[s] && c.priority[s] % 2 == 1) odd.insert(c.priority[s]);
  for (unsigned d : odd) {
    Adjacency adj(c.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
      if (!reach[s] || c.priority[s] > d) continue;
      for (auto t : full[s])
        if (reach[t] && c.priority[t] <= d) adj[s].push_back(t);
    }
    for (const auto& comp : strongly_connected_components(adj)) {
      if (!is_nontrivial(adj, comp)) continue;
      auto top = std::find_if(comp.begin(), comp.end(), [&](std::size_t s) { return c.priority[s] == d; });
      if (top == comp.end()) continue;
      // shortest cycle through *top inside the component
      std::vector<bool> inside(c.size(), false);
      for (auto s : comp) inside[s] = true;
      std::vector<std::size_t> parent(c.size(), kNoOrigin);
      std::deque<std::size_t> queue;
      for (auto t : adj[*top])
        if (inside[t] && parent[t] == kNoOrigin) {
          parent[t] = *top;
          queue.push_back(t);
        }
      while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (v == *top) break;
        for (auto t : adj[v])
          if (inside[t] && parent[t] == kNoOrigin) {
            parent[t] = v;
            queue.push_back(t);
          }
      }
      std::vector<std::size_t> cycle;
      std::size_t v = *top;
      do {
        cycle.push_back(v);
        v = parent[v];
      } while (v != *top && v != kNoOrigin);
      std::reverse(cycle.begin(), cycle.end());
      return cycle;
    }
  }
  return std::nullopt;
}

bool sure_parity_on_chain(const MarkovChain& c) { return !find_odd_cycle(c).has_value(); }

SimulationResult simulate(const MarkovChain& c, std::uint64_t episodes, std::uint64_t horizon,
                          std::uint64_t seed) {
  SimulationResult r;
  r.episodes = episodes;
  r.horizon = horizon;
  r.hits.assign(c.num_targets, 0);
  std::vector<std::vector<double>> cumulative(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) {
    double acc = 0;
    for (const auto& [t, w] : c.trans[s]) {
      acc += w.get_d();
      cumulative[s].push_back(acc);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<bool> hit(c.num_targets);
  for (std::uint64_t e = 0; e < episodes; ++e) {
    std::fill(hit.begin(), hit.end(), false);
    std::size_t s = c.initial;
    for (std::uint64_t step = 0;; ++step) {
      for (std::size_t i = 0; i < c.num_targets; ++i)
        if (c.target_flags[s][i]) hit[i] = true;
      if (step == horizon) break;
      const double u = unit(rng);
      const auto& cum = cumulative[s];
      std::size_t k = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      if (k >= cum.size()) k = cum.size() - 1;
      s = c.trans[s][k].first;
    }
    for (std::size_t i = 0; i < c.num_targets; ++i)
      if (hit[i]) ++r.hits[i];
  }
  r.frequency.resize(c.num_targets);
  for (std::size_t i = 0; i < c.num_targets; ++i)
    r.frequency[i] = episodes ? static_cast<double>(r.hits[i]) / static_cast<double>(episodes) : 0.0;
  return r;
}

}  // namespace mopar
