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

#include "mopar/strategy.hpp"

#include "mopar/errors.hpp"

namespace mopar {

const char* Strategy::kind() const {
  switch (v.index()) {
    case 0: return "memoryless";
    case 1: return "fsm";
    case 2: return "stitched";
    default: return "mixture";
  }
}

bool operator==(const Memoryless& a, const Memoryless& b) { return a.choice == b.choice; }

bool operator==(const FsmRule& a, const FsmRule& b) { return a.next == b.next && a.out == b.out; }

bool operator==(const Fsm& a, const Fsm& b) {
  return a.modes == b.modes && a.initial == b.initial && a.rules == b.rules;
}

namespace {

bool same_ptr(const std::shared_ptr<const Strategy>& a, const std::shared_ptr<const Strategy>& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

}  // namespace

bool operator==(const Stitched& a, const Stitched& b) {
  return a.first == b.first && a.horizon == b.horizon && same_ptr(a.second, b.second);
}

bool operator==(const Mixture& a, const Mixture& b) {
  if (a.parts.size() != b.parts.size()) return false;
  for (std::size_t i = 0; i < a.parts.size(); ++i)
    if (a.parts[i].first != b.parts[i].first || !same_ptr(a.parts[i].second, b.parts[i].second))
      return false;
  return true;
}

bool operator==(const Strategy& a, const Strategy& b) { return a.v == b.v; }

Memoryless deterministic(std::vector<std::pair<std::string, std::string>> picks) {
  Memoryless m;
  for (auto& [s, a] : picks) m.choice[s] = {{a, Rational(1)}};
  return m;
}

Integer memory_size(const Strategy& s) {
  return std::visit(
      [](const auto& x) -> Integer {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Memoryless>) {
          return 1;
        } else if constexpr (std::is_same_v<T, Fsm>) {
          return Integer(static_cast<unsigned long>(x.modes));
        } else if constexpr (std::is_same_v<T, Stitched>) {
          return x.horizon + (x.second ? memory_size(*x.second) : Integer(1));
        } else {
          Integer total = 0;
          for (const auto& [w, p] : x.parts) total += memory_size(*p);
          return total;
        }
      },
      s.v);
}

std::vector<std::pair<std::size_t, Rational>> resolve(const Mdp& m, std::size_t s, const ActionDist* d) {
  std::vector<std::pair<std::size_t, Rational>> out;
  if (d == nullptr) {
    if (m.is_sink(s)) {
      out.emplace_back(0, Rational(1));
      return out;
    }
    throw StrategyError(m.states[s], "strategy has no choice at state '" + m.states[s] + "'");
  }
  Rational total = 0;
  for (const auto& [name, w] : *d) {
    auto a = m.find_action(name);
    std::optional<std::size_t> k;
    if (a) k = m.choice_index(s, *a);
    if (!k)
      throw StrategyError(m.states[s], "action '" + name + "' is not enabled at state '" + m.states[s] + "'");
    if (sgn(w) <= 0)
      throw StrategyError(m.states[s], "non-positive action weight at state '" + m.states[s] + "'");
    total += w;
    out.emplace_back(*k, w);
  }
  if (total != 1)
    throw StrategyError(m.states[s], "action weights at state '" + m.states[s] + "' sum to " + to_string(total));
  return out;
}

namespace {

void check_memoryless(const Mdp& m, const Memoryless& x) {
  for (const auto& [name, dist] : x.choice)
    if (auto s = m.find_state(name)) resolve(m, *s, &dist);
}

}  // namespace

void check_strategy(const Mdp& m, const Strategy& s) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Memoryless>) {
          check_memoryless(m, x);
        } else if constexpr (std::is_same_v<T, Fsm>) {
          if (x.modes == 0 || x.initial >= x.modes) throw StrategyError("", "fsm initial mode out of range");
          for (const auto& [key, rule] : x.rules) {
            if (key.first >= x.modes || rule.next >= x.modes)
              throw StrategyError(key.second, "fsm mode out of range");
            if (auto st = m.find_state(key.second)) resolve(m, *st, &rule.out);
          }
        } else if constexpr (std::is_same_v<T, Stitched>) {
          if (sgn(x.horizon) < 0) throw StrategyError("", "negative horizon");
          check_memoryless(m, x.first);
          if (!x.second) throw StrategyError("", "stitched strategy without second part");
          if (std::holds_alternative<Stitched>(x.second->v) || std::holds_alternative<Mixture>(x.second->v))
            throw StrategyError("", "second part of a stitched strategy must be memoryless or fsm");
          check_strategy(m, *x.second);
        } else {
          if (x.parts.empty()) throw StrategyError("", "empty mixture");
          Rational total = 0;
          for (const auto& [w, p] : x.parts) {
            if (sgn(w) <= 0) throw StrategyError("", "non-positive mixture weight");
            total += w;
            check_strategy(m, *p);
          }
          if (total != 1) throw StrategyError("", "mixture weights sum to " + to_string(total));
        }
      },
      s.v);
}

std::shared_ptr<const Strategy> share(Strategy s) { return std::make_shared<const Strategy>(std::move(s)); }

}  // namespace mopar
