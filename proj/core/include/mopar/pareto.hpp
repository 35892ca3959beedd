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
#include <vector>

#include "mopar/mdp.hpp"
#include "mopar/rational.hpp"
#include "mopar/strategy.hpp"

namespace mopar {

struct Facet {
  Vector normal;  // >= 0, L1 norm 1
  Rational offset;
};

// Upper boundary of the achievable set of a model from a start state, i.e.
// of D = conv(vertices) - R^n_+.
struct Polytope {
  std::size_t dim = 0;
  // Extreme points of D, sorted lexicographically.
  std::vector<Vector> vertices;
  // Achieving memoryless strategy of each vertex.
  std::vector<Memoryless> vertex_strategies;
  std::vector<Facet> upper_facets;
  // Oracle optimum of each facet normal; equals the facet offset.
  std::vector<Rational> certificates;
  // <=-maximal boundary points realised by deterministic memoryless
  // strategies. This includes corners of the upper boundary that are not
  // extreme points of D because they lie inside a flat facet.
  std::vector<Vector> pure_points;
  bool pure_points_complete = true;
};

inline constexpr std::size_t kPureStrategyBudget = 4096;

// Outer approximation with exact LP oracles: every facet of the current
// inner hull is either certified by the oracle or refuted by a new vertex.
// Throws NotClean if the targets cannot be reached almost surely.
Polytope frontier(const Mdp& m, std::size_t s0);

// Facets of conv(points) - R^n_+ (normals non-negative, L1-normalised).
std::vector<Facet> downward_facets(const std::vector<Vector>& points, std::size_t dim);

// Points of `points` that are extreme in conv(points) - R^n_+.
std::vector<Vector> downward_extreme_points(const std::vector<Vector>& points);

struct Face {
  std::vector<std::size_t> facets;  // indices into upper_facets
  std::vector<Vector> vertices;
  std::size_t dimension = 0;
};

// Throws GeometryError(PointOutside) when x violates a facet and
// GeometryError(PointStrictlyInside) when no facet is tight at x.
Face smallest_face(const Polytope& p, const Vector& x);

// L1-normalised sum of the tight normals, each scaled to primitive integers.
Vector face_normal(const Polytope& p, const Face& f);

bool is_vertex(const Polytope& p, const Vector& x);

// w >= 0 with |w|_1 = 1 and w.x > w.y for every other vertex y. Throws
// GeometryError(NotAVertex).
Vector separating_direction(const Polytope& p, const Vector& x);

// Convex weights reproducing x, if any.
std::optional<Vector> in_hull(const std::vector<Vector>& points, const Vector& x);

// True iff x is a convex combination of all points with strictly positive
// weights, i.e. x lies in the relative interior of their hull.
bool relative_interior_test(const std::vector<Vector>& points, const Vector& x);

// A point y >= x in the relative interior of conv(points), if one exists.
std::optional<Vector> dominating_interior_point(const std::vector<Vector>& points, const Vector& x);

// Scales a non-negative rational vector to coprime integers.
Vector primitive(const Vector& v);
Vector l1_normalize(const Vector& v);

}  // namespace mopar
