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

#include "mopar/pareto.hpp"

#include <algorithm>
#include <functional>

#include "mopar/chain.hpp"
#include "mopar/errors.hpp"
#include "mopar/linalg.hpp"
#include "mopar/lp.hpp"
#include "mopar/moreach.hpp"

namespace mopar {

Vector l1_normalize(const Vector& v) {
  Rational norm = 0;
  for (const auto& x : v) norm += abs(x);
  if (sgn(norm) == 0) return v;
  Vector out = v;
  for (auto& x : out) x /= norm;
  return out;
}

Vector primitive(const Vector& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Integer g = 0;
  for (const auto& x : v) {
    Integer num = Rational(x * l).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  if (g == 0) return v;
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i] * l / g);
  return out;
}

namespace {

void sort_unique(std::vector<Vector>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

bool same_facet(const Facet& a, const Facet& b) { return a.normal == b.normal && a.offset == b.offset; }

}  // namespace

std::vector<Facet> downward_facets(const std::vector<Vector>& points_in, std::size_t dim) {
  std::vector<Vector> points = points_in;
  sort_unique(points);
  std::vector<Facet> out;
  if (points.empty()) return out;
  // generators: other points (as differences) or unit directions
  struct Item {
    bool is_point;
    std::size_t index;
  };
  for (std::size_t base = 0; base < points.size(); ++base) {
    std::vector<Item> items;
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != base) items.push_back({true, j});
    for (std::size_t i = 0; i < dim; ++i) items.push_back({false, i});
    const std::size_t need = dim - 1;
    if (items.size() < need) continue;
    std::vector<std::size_t> pick(need);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t depth) {
      if (depth == need) {
        Matrix rows;
        for (auto idx : pick) {
          const Item& it = items[idx];
          Vector r(dim, Rational(0));
          if (it.is_point)
            for (std::size_t d = 0; d < dim; ++d) r[d] = points[it.index][d] - points[base][d];
          else
            r[it.index] = 1;
          rows.push_back(std::move(r));
        }
        auto ns = null_space(rows, dim);
        if (ns.size() != 1) return;
        Vector w = ns[0];
        bool pos = false, neg = false;
        for (const auto& x : w) {
          if (sgn(x) > 0) pos = true;
          if (sgn(x) < 0) neg = true;
        }
        if (pos && neg) return;
        if (neg)
          for (auto& x : w) x = -x;
        w = l1_normalize(w);
        const Rational c = dot(w, points[base]);
        for (const auto& p : points)
          if (dot(w, p) > c) return;
        Facet f{w, c};
        for (const auto& g : out)
          if (same_facet(g, f)) return;
        out.push_back(std::move(f));
        return;
      }
      for (std::size_t i = from; i < items.size(); ++i) {
        pick[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
  }
  std::sort(out.begin(), out.end(), [](const Facet& a, const Facet& b) {
    return a.normal != b.normal ? a.normal > b.normal : a.offset < b.offset;
  });
  return out;
}

namespace {

// True iff v is componentwise dominated by a convex combination of `others`.
bool dominated_by_hull(const std::vector<Vector>& others, const Vector& v) {
  if (others.empty()) return false;
  LinearProgram lp;
  for (std::size_t j = 0; j < others.size(); ++j) lp.add_variable("l" + std::to_string(j));
  lp.add_constraint(Vector(others.size(), Rational(1)), Relation::Eq, Rational(1));
  for (std::size_t d = 0; d < v.size(); ++d) {
    Vector row(others.size());
    for (std::size_t j = 0; j < others.size(); ++j) row[j] = others[j][d];
    lp.add_constraint(row, Relation::Ge, v[d]);
  }
  lp.objective.assign(lp.size(), Rational(0));
  return lp_solve(lp).optimal();
}

}  // namespace

std::vector<Vector> downward_extreme_points(const std::vector<Vector>& points_in) {
  std::vector<Vector> points = points_in;
  sort_unique(points);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<Vector> others;
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i) others.push_back(points[j]);
    if (!dominated_by_hull(others, points[i])) out.push_back(points[i]);
  }
  return out;
}

namespace {

// Calls `leaf` for every deterministic memoryless strategy, enumerating
// choices only at states reachable under the partial strategy. Returns
// false if the budget ran out.
bool enumerate_pure(const Mdp& m, std::size_t s0, std::size_t budget,
                    const std::function<void(const Memoryless&)>& leaf) {
  const std::size_t n = m.size();
  std::vector<std::size_t> pick(n, kNoOrigin);
  std::size_t count = 0;
  std::function<bool()> rec = [&]() -> bool {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> order{s0};
    seen[s0] = true;
    std::size_t open = kNoOrigin;
    for (std::size_t i = 0; i < order.size() && open == kNoOrigin; ++i) {
      const std::size_t s = order[i];
      if (m.is_sink(s)) continue;
      if (pick[s] == kNoOrigin) {
        open = s;
        break;
      }
      for (const auto& [t, w] : m.enabled[s][pick[s]].dist)
        if (!seen[t]) {
          seen[t] = true;
          order.push_back(t);
        }
    }
    if (open == kNoOrigin) {
      if (++count > budget) return false;
      Memoryless sigma;
      for (std::size_t s = 0; s < n; ++s)
        if (pick[s] != kNoOrigin)
          sigma.choice[m.states[s]] = {{m.actions[m.enabled[s][pick[s]].action], Rational(1)}};
      leaf(sigma);
      return true;
    }
    for (std::size_t k = 0; k < m.enabled[open].size(); ++k) {
      pick[open] = k;
      if (!rec()) {
        pick[open] = kNoOrigin;
        return false;
      }
    }
    pick[open] = kNoOrigin;
    return true;
  };
  return rec();
}

}  // namespace

Polytope frontier(const Mdp& m, std::size_t s0) {
  const auto clean = check_clean_targets(m);
  if (!clean.clean) throw NotClean(NotClean::Kind::Targets, clean.offenders);
  const std::size_t n = m.num_targets();
  Polytope p;
  p.dim = n;

  std::vector<Vector> points;
  std::vector<Memoryless> strategies;
  auto add = [&](const DirectionalOptimum& opt) {
    for (const auto& q : points)
      if (q == opt.point) return false;
    points.push_back(opt.point);
    strategies.push_back(opt.strategy);
    return true;
  };
  if (n == 0) {
    add(optimize_direction(m, s0, Vector{}));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Vector e(n, Rational(0));
      e[i] = 1;
      add(optimize_direction(m, s0, e));
    }
  }

  std::vector<Facet> certified;
  for (;;) {
    bool refuted = false;
    for (const auto& f : downward_facets(points, n)) {
      if (std::any_of(certified.begin(), certified.end(), [&](const Facet& g) { return same_facet(f, g); }))
        continue;
      const DirectionalOptimum opt = optimize_direction(m, s0, f.normal);
      if (opt.value == f.offset) {
        certified.push_back(f);
        continue;
      }
      if (opt.value < f.offset || !add(opt))
        throw CertificateFailure("frontier: oracle contradicts the inner approximation");
      refuted = true;
      break;
    }
    if (!refuted) break;
  }

  p.vertices = downward_extreme_points(points);
  for (const auto& v : p.vertices)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (points[j] == v) {
        p.vertex_strategies.push_back(strategies[j]);
        break;
      }
  p.upper_facets = downward_facets(p.vertices, n);
  for (const auto& f : p.upper_facets) {
    if (!std::any_of(certified.begin(), certified.end(), [&](const Facet& g) { return same_facet(f, g); }))
      throw CertificateFailure("frontier: uncertified facet in the final hull");
    p.certificates.push_back(f.offset);
  }

  // boundary points of pure strategies
  std::vector<Vector> pure;
  p.pure_points_complete = enumerate_pure(m, s0, kPureStrategyBudget, [&](const Memoryless& sigma) {
    const Vector x = reach_vector(induce(m, Strategy(sigma), s0));
    for (const auto& f : p.upper_facets)
      if (dot(f.normal, x) == f.offset) {
        pure.push_back(x);
        return;
      }
  });
  sort_unique(pure);
  for (const auto& x : pure) {
    bool dominated = false;
    for (const auto& y : pure)
      if (y != x && dominates(y, x)) dominated = true;
    if (!dominated) p.pure_points.push_back(x);
  }
  return p;
}

Face smallest_face(const Polytope& p, const Vector& x) {
  Face f;
  for (std::size_t j = 0; j < p.upper_facets.size(); ++j) {
    const Rational v = dot(p.upper_facets[j].normal, x);
    if (v > p.upper_facets[j].offset)
      throw GeometryError(GeometryError::Kind::PointOutside, "point " + to_string(x) + " lies outside the frontier");
    if (v == p.upper_facets[j].offset) f.facets.push_back(j);
  }
  if (f.facets.empty())
    throw GeometryError(GeometryError::Kind::PointStrictlyInside,
                        "point " + to_string(x) + " lies strictly inside the achievable set");
  for (const auto& v : p.vertices) {
    bool tight = true;
    for (auto j : f.facets)
      if (dot(p.upper_facets[j].normal, v) != p.upper_facets[j].offset) tight = false;
    if (tight) f.vertices.push_back(v);
  }
  if (!f.vertices.empty()) {
    Matrix diffs;
    for (std::size_t i = 1; i < f.vertices.size(); ++i) {
      Vector d(p.dim);
      for (std::size_t k = 0; k < p.dim; ++k) d[k] = f.vertices[i][k] - f.vertices[0][k];
      diffs.push_back(std::move(d));
    }
    f.dimension = rank(diffs);
  }
  return f;
}

Vector face_normal(const Polytope& p, const Face& f) {
  Vector sum(p.dim, Rational(0));
  for (auto j : f.facets) {
    const Vector w = primitive(p.upper_facets[j].normal);
    for (std::size_t k = 0; k < p.dim; ++k) sum[k] += w[k];
  }
  return l1_normalize(sum);
}

bool is_vertex(const Polytope& p, const Vector& x) {
  return std::find(p.vertices.begin(), p.vertices.end(), x) != p.vertices.end();
}

Vector separating_direction(const Polytope& p, const Vector& x) {
  if (!is_vertex(p, x))
    throw GeometryError(GeometryError::Kind::NotAVertex, "point " + to_string(x) + " is not a vertex");
  std::vector<Vector> tight;
  for (const auto& f : p.upper_facets)
    if (dot(f.normal, x) == f.offset) tight.push_back(primitive(f.normal));
  auto separates = [&](const Vector& w) {
    for (const auto& y : p.vertices)
      if (y != x && dot(w, x) <= dot(w, y)) return false;
    return true;
  };
  // plain sum first, then re-weight one generator at a time
  for (std::size_t attempt = 0; attempt <= tight.size(); ++attempt) {
    for (unsigned scale = 2; scale <= (attempt == 0 ? 2u : 64u); scale *= 2) {
      Vector w(p.dim, Rational(0));
      for (std::size_t j = 0; j < tight.size(); ++j) {
        const Rational c = (attempt > 0 && j == attempt - 1) ? Rational(scale) : Rational(1);
        for (std::size_t k = 0; k < p.dim; ++k) w[k] += c * tight[j][k];
      }
      w = l1_normalize(w);
      if (separates(w)) return w;
    }
  }
  throw CertificateFailure("no separating direction found at " + to_string(x));
}

std::optional<Vector> in_hull(const std::vector<Vector>& points, const Vector& x) {
  if (points.empty()) return std::nullopt;
  LinearProgram lp;
  for (std::size_t j = 0; j < points.size(); ++j) lp.add_variable("l" + std::to_string(j));
  lp.add_constraint(Vector(points.size(), Rational(1)), Relation::Eq, Rational(1));
  for (std::size_t d = 0; d < x.size(); ++d) {
    Vector row(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) row[j] = points[j][d];
    lp.add_constraint(row, Relation::Eq, x[d]);
  }
  lp.objective.assign(lp.size(), Rational(0));
  LpOutcome res = lp_solve(lp);
  if (!res.optimal()) return std::nullopt;
  return res.point;
}

namespace {

// max t s.t. x (rel) sum_j l_j points[j], sum l = 1, l_j >= t.
LpOutcome interior_lp(const std::vector<Vector>& points, const Vector& x, Relation rel) {
  const std::size_t k = points.size();
  LinearProgram lp;
  for (std::size_t j = 0; j < k; ++j) lp.add_variable("l" + std::to_string(j));
  const std::size_t t = lp.add_variable("t", false);
  Vector ones(k + 1, Rational(1));
  ones[t] = 0;
  lp.add_constraint(ones, Relation::Eq, Rational(1));
  for (std::size_t d = 0; d < x.size(); ++d) {
    Vector row(k + 1, Rational(0));
    for (std::size_t j = 0; j < k; ++j) row[j] = points[j][d];
    lp.add_constraint(row, rel, x[d]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    Vector row(k + 1, Rational(0));
    row[j] = 1;
    row[t] = -1;
    lp.add_constraint(row, Relation::Ge, Rational(0));
  }
  lp.objective.assign(k + 1, Rational(0));
  lp.objective[t] = 1;
  return lp_solve(lp);
}

}  // namespace

bool relative_interior_test(const std::vector<Vector>& points, const Vector& x) {
  if (points.empty()) return false;
  const LpOutcome res = interior_lp(points, x, Relation::Eq);
  return res.optimal() && sgn(res.value) > 0;
}

std::optional<Vector> dominating_interior_point(const std::vector<Vector>& points, const Vector& x) {
  if (points.empty()) return std::nullopt;
  const LpOutcome res = interior_lp(points, x, Relation::Ge);
  if (!res.optimal() || sgn(res.value) <= 0) return std::nullopt;
  Vector y(x.size(), Rational(0));
  for (std::size_t j = 0; j < points.size(); ++j)
    for (std::size_t d = 0; d < x.size(); ++d) y[d] += res.point[j] * points[j][d];
  return y;
}

}  // namespace mopar
