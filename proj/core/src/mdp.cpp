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

#include "mopar/mdp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "mopar/errors.hpp"

namespace mopar {

std::optional<std::size_t> Mdp::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Mdp::find_action(std::string_view name) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == name) return i;
  return std::nullopt;
}

std::size_t Mdp::state_index(std::string_view name) const {
  if (auto s = find_state(name)) return *s;
  throw ModelError(ModelError::Kind::UnknownState, std::string(name),
                   "unknown state '" + std::string(name) + "'");
}

std::optional<std::size_t> Mdp::find_target(std::string_view name) const {
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (targets[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Mdp::choice_index(std::size_t s, std::size_t action) const {
  const auto& cs = enabled[s];
  for (std::size_t k = 0; k < cs.size(); ++k)
    if (cs[k].action == action) return k;
  return std::nullopt;
}

bool Mdp::is_sink(std::size_t s) const {
  const auto& cs = enabled[s];
  return cs.size() == 1 && cs[0].dist.size() == 1 && cs[0].dist[0].first == s;
}

std::vector<bool> Mdp::target_flags(std::size_t s) const {
  std::vector<bool> out(targets.size(), false);
  for (std::size_t i = 0; i < targets.size(); ++i)
    out[i] = std::binary_search(targets[i].states.begin(), targets[i].states.end(), s);
  return out;
}

std::vector<bool> Mdp::target_union() const {
  std::vector<bool> out(states.size(), false);
  for (const auto& t : targets)
    for (auto s : t.states) out[s] = true;
  return out;
}

std::size_t Mdp::num_choices() const {
  std::size_t n = 0;
  for (const auto& cs : enabled) n += cs.size();
  return n;
}

std::size_t Mdp::num_priorities() const {
  std::set<unsigned> seen(priority.begin(), priority.end());
  return seen.size();
}

namespace {

std::string pair_name(const Mdp& m, std::size_t s, std::size_t a) {
  return "(" + m.states[s] + "," + (a < m.actions.size() ? m.actions[a] : "?") + ")";
}

bool all_self_loops(const std::vector<Choice>& cs, std::size_t s) {
  if (cs.empty()) return false;
  for (const auto& c : cs)
    if (c.dist.size() != 1 || c.dist[0].first != s) return false;
  return true;
}

}  // namespace

Mdp validate_mdp(Mdp m) {
  using K = ModelError::Kind;
  const std::size_t n = m.states.size();
  {
    std::set<std::string> seen;
    for (const auto& s : m.states)
      if (!seen.insert(s).second) throw ModelError(K::DuplicateState, s, "duplicate state '" + s + "'");
  }
  m.enabled.resize(n);
  if (m.priority.size() != n) m.priority.resize(n, 0);

  std::size_t star = m.actions.size();
  if (auto a = m.find_action(kSinkAction)) star = *a;

  for (std::size_t s = 0; s < n; ++s) {
    auto& cs = m.enabled[s];
    std::set<std::size_t> acts;
    for (auto& c : cs) {
      if (c.action >= m.actions.size())
        throw ModelError(K::DuplicateAction, m.states[s], "action index out of range at " + m.states[s]);
      if (!acts.insert(c.action).second)
        throw ModelError(K::DuplicateAction, pair_name(m, s, c.action),
                         "action declared twice: " + pair_name(m, s, c.action));
      std::map<std::size_t, Rational> merged;
      for (const auto& [t, w] : c.dist) {
        if (t >= n) throw ModelError(K::UnknownState, pair_name(m, s, c.action), "successor out of range");
        if (sgn(w) < 0 || w > 1)
          throw ModelError(K::BadWeight, pair_name(m, s, c.action),
                           "probability " + to_string(w) + " outside [0,1] in " + pair_name(m, s, c.action));
        merged[t] += w;
      }
      Rational total = 0;
      c.dist.clear();
      for (auto& [t, w] : merged) {
        total += w;
        if (sgn(w) != 0) c.dist.emplace_back(t, w);
      }
      if (total != 1)
        throw ModelError(K::RowNotStochastic, pair_name(m, s, c.action),
                         "probabilities of " + pair_name(m, s, c.action) + " sum to " + to_string(total));
    }
    if (cs.empty())
      throw ModelError(K::NoEnabledAction, m.states[s], "state '" + m.states[s] + "' has no enabled action");
    if (all_self_loops(cs, s) && !(cs.size() == 1 && cs[0].action == star)) {
      if (star == m.actions.size()) m.actions.emplace_back(kSinkAction);
      cs.clear();
      cs.push_back({star, {{s, Rational(1)}}});
    }
    std::sort(cs.begin(), cs.end(), [](const Choice& a, const Choice& b) { return a.action < b.action; });
  }

  std::set<std::string> names;
  for (auto& t : m.targets) {
    if (!names.insert(t.name).second)
      throw ModelError(K::DuplicateTarget, t.name, "target '" + t.name + "' declared twice");
    std::sort(t.states.begin(), t.states.end());
    t.states.erase(std::unique(t.states.begin(), t.states.end()), t.states.end());
    for (auto s : t.states) {
      if (s >= n) throw ModelError(K::UnknownState, t.name, "target '" + t.name + "' names an unknown state");
      if (!m.is_sink(s))
        throw ModelError(K::TargetNotSink, m.states[s],
                         "target state '" + m.states[s] + "' is not a sink");
    }
  }
  if (m.initial && *m.initial >= n)
    throw ModelError(K::UnknownState, "init", "initial state out of range");
  return m;
}

Mdp restrict(const Mdp& m, const std::vector<bool>& keep_in) {
  const std::size_t n = m.size();
  std::vector<bool> keep(n, false);
  for (std::size_t s = 0; s < n && s < keep_in.size(); ++s) keep[s] = keep_in[s];
  std::vector<std::vector<bool>> allowed(n);
  for (std::size_t s = 0; s < n; ++s) allowed[s].assign(m.enabled[s].size(), true);

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!keep[s]) continue;
      bool any = false;
      for (std::size_t k = 0; k < m.enabled[s].size(); ++k) {
        if (!allowed[s][k]) continue;
        for (const auto& [t, w] : m.enabled[s][k].dist)
          if (!keep[t]) {
            allowed[s][k] = false;
            break;
          }
        any = any || allowed[s][k];
      }
      if (!any) {
        keep[s] = false;
        changed = true;
      }
    }
  }

  std::vector<std::size_t> index(n, n);
  Mdp out;
  out.actions = m.actions;
  for (std::size_t s = 0; s < n; ++s)
    if (keep[s]) {
      index[s] = out.states.size();
      out.states.push_back(m.states[s]);
      out.priority.push_back(m.priority[s]);
    }
  out.enabled.resize(out.states.size());
  for (std::size_t s = 0; s < n; ++s) {
    if (!keep[s]) continue;
    for (std::size_t k = 0; k < m.enabled[s].size(); ++k) {
      if (!allowed[s][k]) continue;
      Choice c{m.enabled[s][k].action, {}};
      for (const auto& [t, w] : m.enabled[s][k].dist) c.dist.emplace_back(index[t], w);
      out.enabled[index[s]].push_back(std::move(c));
    }
  }
  for (const auto& t : m.targets) {
    Target nt{t.name, {}};
    for (auto s : t.states)
      if (keep[s]) nt.states.push_back(index[s]);
    out.targets.push_back(std::move(nt));
  }
  if (m.initial && keep[*m.initial]) out.initial = index[*m.initial];
  return out;
}

Mdp restrict(const Mdp& m, const std::vector<std::string>& keep) {
  std::vector<bool> mask(m.size(), false);
  for (const auto& name : keep)
    if (auto s = m.find_state(name)) mask[*s] = true;
  return restrict(m, mask);
}

std::vector<bool> reachable_states(const Mdp& m, std::size_t from) {
  std::vector<bool> seen(m.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (const auto& c : m.enabled[s])
      for (const auto& [t, w] : c.dist)
        if (!seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
  }
  return seen;
}

std::vector<bool> can_reach(const Mdp& m, const std::vector<bool>& goal) {
  const std::size_t n = m.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& c : m.enabled[s])
      for (const auto& [t, w] : c.dist) pred[t].push_back(s);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s)
    if (goal[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    auto t = queue.front();
    queue.pop_front();
    for (auto s : pred[t])
      if (!seen[s]) {
        seen[s] = true;
        queue.push_back(s);
      }
  }
  return seen;
}

}  // namespace mopar
