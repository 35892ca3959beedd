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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mopar/chain.hpp"
#include "mopar/game.hpp"
#include "mopar/mdp.hpp"
#include "mopar/moreach.hpp"
#include "mopar/strategy.hpp"
#include "mopar/text_format.hpp"

#ifndef MOPAR_CORPUS_DIR
#error "MOPAR_CORPUS_DIR must point at the bundled corpus"
#endif

namespace mopar::testing {

inline Rational R(long n, long d = 1) { return make_rational(n, d); }

// The two-round game show, built field by field so parser tests have an
// independent reference.
inline Mdp gameshow() {
  Mdp m;
  m.states = {"s", "s1", "s2", "r1", "r12", "r2"};
  m.actions = {"pair1", "pair2", "a", "b", "*"};
  m.priority = {1, 1, 1, 0, 0, 0};
  m.enabled.resize(6);
  m.enabled[0] = {{0, {{1, R(1)}}}, {1, {{2, R(1)}}}};
  m.enabled[1] = {{2, {{1, R(1, 2)}, {3, R(1, 3)}, {4, R(1, 6)}}}, {3, {{5, R(1)}}}};
  m.enabled[2] = {{2, {{2, R(1, 2)}, {4, R(1, 6)}, {5, R(1, 3)}}}, {3, {{3, R(1, 3)}, {4, R(1, 3)}, {5, R(1, 3)}}}};
  for (std::size_t s = 3; s < 6; ++s) m.enabled[s] = {{4, {{s, R(1)}}}};
  m.targets = {{"F1", {3, 4}}, {"F2", {4, 5}}};
  m.initial = 0;
  return validate_mdp(m);
}

inline std::string corpus_path(const std::string& name) { return std::string(MOPAR_CORPUS_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Mdp load_corpus(const std::string& name) { return parse_mdp(read_text(corpus_path(name))); }

inline std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(MOPAR_CORPUS_DIR))
    if (e.path().extension() == ".mdp") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

// True when every state surely satisfies parity and reaches the target
// union almost surely.
inline bool is_clean(const Mdp& m) {
  const auto region = sure_parity_region(m).states;
  for (bool b : region)
    if (!b) return false;
  return check_clean_targets(m).clean;
}

struct RandomSpec {
  int min_states = 2;
  int max_states = 5;
  int max_actions = 2;
  unsigned max_priority = 3;
  int targets = 1;
  int max_sinks = 2;
  bool thirds = false;  // also draw three-way splits with weights 1/3
};

// Random model: the last 1..max_sinks states are sinks, every other state
// has 1..max_actions actions with one, two or three successors.
inline Mdp random_mdp(std::mt19937_64& rng, const RandomSpec& spec = {}) {
  std::uniform_int_distribution<int> ns(spec.min_states, spec.max_states);
  std::uniform_int_distribution<unsigned> pr(0, spec.max_priority);
  std::uniform_int_distribution<int> na(1, spec.max_actions);
  std::uniform_int_distribution<int> coin(0, 1);
  const int n = ns(rng);
  Mdp m;
  for (int a = 0; a < spec.max_actions; ++a) m.actions.push_back(std::string(1, static_cast<char>('a' + a)));
  m.actions.push_back("*");
  const std::size_t star = m.actions.size() - 1;
  for (int s = 0; s < n; ++s) {
    m.states.push_back("q" + std::to_string(s));
    m.priority.push_back(pr(rng));
  }
  m.enabled.resize(static_cast<std::size_t>(n));
  m.targets.resize(static_cast<std::size_t>(spec.targets));
  for (int i = 0; i < spec.targets; ++i) m.targets[static_cast<std::size_t>(i)].name = "F" + std::to_string(i + 1);
  const int sinks = std::min(n - 1, 1 + static_cast<int>(rng() % static_cast<unsigned>(spec.max_sinks)));
  std::uniform_int_distribution<int> succ(0, n - 1);
  for (int s = 0; s < n; ++s) {
    const auto su = static_cast<std::size_t>(s);
    if (s >= n - sinks) {
      m.enabled[su] = {{star, {{su, R(1)}}}};
      for (int i = 0; i < spec.targets; ++i)
        if (coin(rng) || (s == n - 1 && i == 0)) m.targets[static_cast<std::size_t>(i)].states.push_back(su);
      continue;
    }
    const int k = na(rng);
    for (int a = 0; a < k; ++a) {
      Distribution d;
      const int shape = spec.thirds ? static_cast<int>(rng() % 3) : coin(rng);
      if (shape == 0) {
        d = {{static_cast<std::size_t>(succ(rng)), R(1)}};
      } else if (shape == 1) {
        d = {{static_cast<std::size_t>(succ(rng)), R(1, 2)}, {static_cast<std::size_t>(succ(rng)), R(1, 2)}};
      } else {
        for (int j = 0; j < 3; ++j) d.push_back({static_cast<std::size_t>(succ(rng)), R(1, 3)});
      }
      m.enabled[su].push_back({static_cast<std::size_t>(a), d});
    }
  }
  m.initial = 0;
  return validate_mdp(m);
}

// Random model that passes is_clean, by rejection.
inline Mdp random_clean_mdp(std::mt19937_64& rng, const RandomSpec& spec = {}) {
  for (;;) {
    Mdp m = random_mdp(rng, spec);
    if (is_clean(m)) return m;
  }
}

// Calls f once for every pure memoryless strategy of m.
inline void for_each_pure(const Mdp& m, const std::function<void(const Memoryless&)>& f) {
  std::vector<std::size_t> pick(m.size(), 0);
  for (;;) {
    Memoryless sigma;
    for (std::size_t s = 0; s < m.size(); ++s)
      if (!m.is_sink(s)) sigma.choice[m.states[s]] = {{m.actions[m.enabled[s][pick[s]].action], R(1)}};
    f(sigma);
    std::size_t s = 0;
    for (; s < m.size(); ++s) {
      if (++pick[s] < m.enabled[s].size()) break;
      pick[s] = 0;
    }
    if (s == m.size()) return;
  }
}

// Random absorbing chain on <= max_states states: the last state is the
// target sink and the rest move with weights in {1/2, 1/3, 1/4}.
inline MarkovChain random_chain(std::mt19937_64& rng, int max_states = 5) {
  std::uniform_int_distribution<int> ns(2, max_states);
  const int n = ns(rng);
  std::uniform_int_distribution<int> succ(0, n - 1);
  MarkovChain c;
  c.num_targets = 1;
  for (int s = 0; s < n; ++s) {
    c.labels.push_back("c" + std::to_string(s));
    c.origin.push_back(static_cast<std::size_t>(s));
    c.priority.push_back(0);
    c.target_flags.push_back({s == n - 1});
    Distribution d;
    if (s == n - 1) {
      d = {{static_cast<std::size_t>(s), R(1)}};
    } else {
      const int k = 2 + static_cast<int>(rng() % 3);
      std::map<std::size_t, Rational> w;
      for (int j = 0; j < k; ++j) w[static_cast<std::size_t>(succ(rng))] += R(1, k);
      d.assign(w.begin(), w.end());
    }
    c.trans.push_back(d);
  }
  c.initial = 0;
  return c;
}

}  // namespace mopar::testing
