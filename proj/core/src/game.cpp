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

#include "mopar/game.hpp"

#include <algorithm>

#include "mopar/chain.hpp"
#include "mopar/errors.hpp"

namespace mopar {

TurnBasedGame build_game(const Mdp& m) {
  TurnBasedGame g;
  const std::size_t n = m.size();
  g.num_controller = n;
  g.owner.assign(n, 0);
  g.priority = m.priority;
  g.succ.resize(n);
  g.fair.assign(n, false);
  g.source.assign(n, kNoMove);
  g.choice.assign(n, kNoMove);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < m.enabled[s].size(); ++k) {
      const std::size_t v = g.owner.size();
      g.owner.push_back(1);
      g.priority.push_back(m.priority[s]);
      std::vector<std::size_t> out;
      for (const auto& [t, w] : m.enabled[s][k].dist) out.push_back(t);
      g.fair.push_back(!out.empty());
      g.succ.push_back(std::move(out));
      g.source.push_back(s);
      g.choice.push_back(k);
      g.succ[s].push_back(v);
    }
  }
  return g;
}

namespace {

class Zielonka {
 public:
  explicit Zielonka(const TurnBasedGame& g) : g_(g), pred_(g.size()) {
    for (std::size_t v = 0; v < g.size(); ++v)
      for (auto w : g.succ[v]) pred_[w].push_back(v);
  }

  WinningRegions solve(const std::vector<bool>& alive) {
    const std::size_t n = g_.size();
    WinningRegions r{std::vector<bool>(n, false), std::vector<bool>(n, false),
                     std::vector<std::size_t>(n, kNoMove), std::vector<std::size_t>(n, kNoMove)};
    bool any = false;
    unsigned d = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v]) {
        d = any ? std::max(d, g_.priority[v]) : g_.priority[v];
        any = true;
      }
    if (!any) return r;
    const int alpha = static_cast<int>(d % 2);
    std::vector<bool> top(n, false);
    for (std::size_t v = 0; v < n; ++v) top[v] = alive[v] && g_.priority[v] == d;

    std::vector<std::size_t> attr_move(n, kNoMove);
    const auto a = attractor(alive, top, alpha, attr_move);
    std::vector<bool> rest(n, false);
    for (std::size_t v = 0; v < n; ++v) rest[v] = alive[v] && !a[v];
    WinningRegions sub = solve(rest);

    auto& won_alpha = alpha == 0 ? sub.even : sub.odd;
    auto& won_beta = alpha == 0 ? sub.odd : sub.even;
    if (std::none_of(won_beta.begin(), won_beta.end(), [](bool b) { return b; })) {
      auto& region = alpha == 0 ? r.even : r.odd;
      auto& strat = alpha == 0 ? r.strategy_even : r.strategy_odd;
      const auto& sub_strat = alpha == 0 ? sub.strategy_even : sub.strategy_odd;
      for (std::size_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        region[v] = true;
        if (g_.owner[v] != alpha) continue;
        if (rest[v]) {
          strat[v] = sub_strat[v];
        } else if (!top[v]) {
          strat[v] = attr_move[v];
        } else {
          for (auto w : g_.succ[v])
            if (alive[w]) {
              strat[v] = w;
              break;
            }
        }
      }
      (void)won_alpha;
      return r;
    }

    const int beta = 1 - alpha;
    std::vector<std::size_t> beta_move(n, kNoMove);
    const auto b = attractor(alive, won_beta, beta, beta_move);
    std::vector<bool> rest2(n, false);
    for (std::size_t v = 0; v < n; ++v) rest2[v] = alive[v] && !b[v];
    WinningRegions sub2 = solve(rest2);
    r.even = sub2.even;
    r.odd = sub2.odd;
    r.strategy_even = sub2.strategy_even;
    r.strategy_odd = sub2.strategy_odd;
    auto& region_beta = beta == 0 ? r.even : r.odd;
    auto& strat_beta = beta == 0 ? r.strategy_even : r.strategy_odd;
    const auto& sub_beta_strat = beta == 0 ? sub.strategy_even : sub.strategy_odd;
    for (std::size_t v = 0; v < n; ++v) {
      if (!b[v]) continue;
      region_beta[v] = true;
      if (g_.owner[v] != beta) continue;
      strat_beta[v] = won_beta[v] ? sub_beta_strat[v] : beta_move[v];
    }
    return r;
  }

 private:
  // Attractor of `target` for `player` inside `alive`; records the move
  // chosen at each attracted vertex of that player.
  std::vector<bool> attractor(const std::vector<bool>& alive, const std::vector<bool>& target, int player,
                              std::vector<std::size_t>& move) const {
    const std::size_t n = g_.size();
    std::vector<bool> in(n, false);
    std::vector<std::size_t> remaining(n, 0);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      for (auto w : g_.succ[v])
        if (alive[w]) ++remaining[v];
      if (target[v]) {
        in[v] = true;
        queue.push_back(v);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t w = queue[head];
      std::vector<std::size_t> preds = pred_[w];
      std::sort(preds.begin(), preds.end());
      for (auto v : preds) {
        if (!alive[v] || in[v]) continue;
        if (g_.owner[v] == player) {
          in[v] = true;
          move[v] = w;
          queue.push_back(v);
        } else if (--remaining[v] == 0) {
          in[v] = true;
          queue.push_back(v);
        }
      }
    }
    return in;
  }

  const TurnBasedGame& g_;
  std::vector<std::vector<std::size_t>> pred_;
};

}  // namespace

WinningRegions zielonka(const TurnBasedGame& g) {
  Zielonka z(g);
  return z.solve(std::vector<bool>(g.size(), true));
}

ParityRegion sure_parity_region(const Mdp& m) {
  const TurnBasedGame g = build_game(m);
  const WinningRegions w = zielonka(g);
  ParityRegion out;
  out.states.assign(m.size(), false);
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (!w.even[s]) continue;
    out.states[s] = true;
    const std::size_t v = w.strategy_even[s];
    if (v == kNoMove) throw CertificateFailure("parity: missing strategy at " + m.states[s]);
    if (!m.is_sink(s)) out.strategy.choice[m.states[s]] = {{m.actions[m.enabled[s][g.choice[v]].action], Rational(1)}};
  }
  // the strategy must win from every state of the region on the closed sub-model
  const Mdp sub = restrict(m, out.states);
  for (std::size_t s = 0; s < sub.size(); ++s) {
    const MarkovChain c = induce(sub, Strategy(out.strategy), s);
    if (!sure_parity_on_chain(c))
      throw CertificateFailure("parity strategy fails its re-check at " + sub.states[s]);
  }
  return out;
}

Mdp clean_wrt_parity(const Mdp& m) { return restrict(m, sure_parity_region(m).states); }

}  // namespace mopar
