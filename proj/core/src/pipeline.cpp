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

#include "mopar/pipeline.hpp"

#include "mopar/conj.hpp"
#include "mopar/errors.hpp"
#include "mopar/game.hpp"

namespace mopar {

const char* to_string(TraceStep::Kind k) {
  switch (k) {
    case TraceStep::Kind::Clean:
      return "clean";
    case TraceStep::Kind::Achievable:
      return "achievable";
    case TraceStep::Kind::Project:
      return "project";
    case TraceStep::Kind::Prune:
      return "prune";
    case TraceStep::Kind::Frontier:
      return "frontier";
    case TraceStep::Kind::VertexCase:
      return "vertex-case";
    case TraceStep::Kind::InteriorCase:
      return "interior-case";
    case TraceStep::Kind::Witness:
      return "witness";
    case TraceStep::Kind::Note:
      return "note";
  }
  return "note";
}

namespace {

std::size_t carry(const Mdp& from, std::size_t s, const Mdp& to) {
  auto t = to.find_state(from.states[s]);
  if (!t) throw CertificateFailure("state " + from.states[s] + " vanished from a sub-model");
  return *t;
}

TraceStep note(TraceStep::Kind kind, std::string summary) {
  TraceStep t;
  t.kind = kind;
  t.summary = std::move(summary);
  return t;
}

Thresholds exactly(const Vector& p) {
  Thresholds out;
  for (const auto& x : p) out.emplace_back(x);
  return out;
}

// Re-checks a yes-witness on the original model; a failure is a bug.
void seal(const Mdp& m, std::size_t s0, const Thresholds& p, bool strict, const PipelineOptions& opt, Verdict& v) {
  Requirement req{true, p, strict};
  v.record = verify_strategy(m, *v.witness, s0, req, opt.materialize_cap);
  if (!v.record->all_pass) throw CertificateFailure("synthesised witness failed verification");
  if (v.record->exact) v.achieved = v.record->reach;
}

std::vector<std::string> removed_states(const Mdp& m, const std::vector<bool>& keep) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (!keep[s]) out.push_back(m.states[s]);
  return out;
}

// Projects on v and prunes to the conjunction region. Returns false when the
// start state does not survive.
bool project_and_prune(Mdp& cur, std::size_t& s0, const Vector& v, std::vector<TraceStep>& trace,
                       std::optional<ConjResult>* conj_out = nullptr) {
  Projection proj = project(cur, v);
  TraceStep t = note(TraceStep::Kind::Project, "project on direction " + to_string(v));
  t.direction = v;
  for (const auto& [s, a] : proj.removed) t.states.push_back(s + ":" + a);
  trace.push_back(std::move(t));

  ConjResult conj = conj_region(proj.restricted);
  TraceStep pr = note(TraceStep::Kind::Prune, "");
  pr.states = removed_states(proj.restricted, conj.states);
  pr.summary = pr.states.empty() ? "no state removed" : "removed states failing sure parity with almost-sure reach";
  trace.push_back(std::move(pr));
  const std::size_t start = carry(cur, s0, proj.restricted);
  if (!conj.states[start]) return false;
  Mdp next = restrict(proj.restricted, conj.states);
  s0 = carry(proj.restricted, start, next);
  cur = std::move(next);
  if (conj_out) *conj_out = std::move(conj);
  return true;
}

Verdict vertex_case_traced(const Mdp& m, const Mdp& cur, const Vector& p, std::size_t c0, const Polytope& poly,
                           std::size_t s0, std::vector<TraceStep> trace, const PipelineOptions& opt) {
  Verdict out;
  const Vector w = separating_direction(poly, p);
  TraceStep t = note(TraceStep::Kind::VertexCase, "vertex case with separating direction " + to_string(w));
  t.direction = w;
  trace.push_back(std::move(t));
  Mdp work = cur;
  std::size_t start = c0;
  std::optional<ConjResult> conj;
  if (!project_and_prune(work, start, w, trace, &conj)) {
    trace.push_back(note(TraceStep::Kind::Note, "start state removed: no strategy attains the vertex"));
    out.trace = std::move(trace);
    return out;
  }
  out.yes = true;
  out.witness = Strategy(conj->strategy);
  out.trace = std::move(trace);
  seal(m, s0, exactly(p), false, opt, out);
  if (!out.achieved || *out.achieved != p) throw CertificateFailure("vertex witness does not attain the vertex exactly");
  out.trace.push_back(note(TraceStep::Kind::Witness, "finite-memory witness with " +
                                                        to_string(memory_size(*out.witness)) + " modes"));
  return out;
}

}  // namespace

void require_clean(const Mdp& m) {
  const ParityRegion par = sure_parity_region(m);
  std::vector<std::string> bad;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (!par.states[s]) bad.push_back(m.states[s]);
  if (!bad.empty()) throw NotClean(NotClean::Kind::Parity, bad);
  const CleanReport targets = check_clean_targets(m);
  if (!targets.clean) throw NotClean(NotClean::Kind::Targets, targets.offenders);
}

Projection project(const Mdp& m, const Vector& v) {
  if (v.size() != m.num_targets()) throw std::invalid_argument("direction has the wrong length");
  const std::size_t n = m.size();
  Projection out;
  out.bottom = "bot";
  while (m.find_state(out.bottom)) out.bottom += "_";

  std::vector<Rational> weight(n, Rational(0));
  for (std::size_t i = 0; i < m.num_targets(); ++i)
    for (auto s : m.targets[i].states) weight[s] += v[i];
  const auto f = m.target_union();

  Mdp g = m;
  g.states.push_back(out.bottom);
  g.priority.push_back(0);
  std::size_t star = g.find_action(kSinkAction).value_or(g.actions.size());
  if (star == g.actions.size()) g.actions.emplace_back(kSinkAction);
  g.enabled.push_back({Choice{star, {{n, Rational(1)}}}});
  for (std::size_t s = 0; s < n; ++s) {
    if (m.is_sink(s)) continue;
    for (auto& c : g.enabled[s]) {
      Distribution d;
      for (const auto& [t, w] : c.dist) {
        if (f[t]) {
          d.emplace_back(t, w * weight[t]);
          d.emplace_back(n, w * (1 - weight[t]));
        } else {
          d.emplace_back(t, w);
        }
      }
      c.dist = std::move(d);
    }
  }
  g = validate_mdp(std::move(g));

  out.values = max_reach_values(g, g.target_union()).values;
  out.projected = g;
  out.restricted = m;
  for (std::size_t s = 0; s < n; ++s) {
    if (m.is_sink(s)) continue;
    std::vector<Choice> kept_g, kept_m;
    for (std::size_t k = 0; k < g.enabled[s].size(); ++k) {
      Rational val = 0;
      for (const auto& [t, w] : g.enabled[s][k].dist) val += w * out.values[t];
      if (val == out.values[s]) {
        kept_g.push_back(g.enabled[s][k]);
        kept_m.push_back(m.enabled[s][k]);
      } else {
        out.removed.emplace_back(m.states[s], m.actions[m.enabled[s][k].action]);
      }
    }
    out.projected.enabled[s] = std::move(kept_g);
    out.restricted.enabled[s] = std::move(kept_m);
  }
  out.values.resize(n);
  // A target sink is worth its own weight; the projected model sends the
  // rest of the mass entering it to the bottom sink.
  for (std::size_t s = 0; s < n; ++s)
    if (f[s] && m.is_sink(s)) out.values[s] = weight[s];
  return out;
}

Verdict decide_strict(const Mdp& m, const Thresholds& p, std::size_t s0, const PipelineOptions& opt) {
  require_clean(m);
  Verdict out;
  out.trace.push_back(note(TraceStep::Kind::Clean, "model is clean for parity and targets"));
  const Achievability ach = achievable(m, s0, p, true, false);
  out.trace.push_back(note(TraceStep::Kind::Achievable, "strict margin t* = " + to_string(ach.margin)));
  if (!ach.yes) return out;

  // Aim at thresholds raised by half the margin so every constrained target
  // is exceeded by a computed amount.
  Thresholds raised = p;
  for (auto& x : raised)
    if (x) *x += ach.margin / 2;
  const OccupationLp occ = build_occupation_lp(m, s0);
  const Achievability mid = achievable(m, s0, raised, false, false);
  if (!mid.yes) throw CertificateFailure("raised thresholds are not achievable");
  const Memoryless sigma_pr = extract_memoryless(m, occ, mid.occupation);
  const MarkovChain chain = induce(m, Strategy(sigma_pr), s0);
  const Integer b = bound_B(chain, p);
  const Memoryless sigma_phi = sure_parity_region(m).strategy;
  out.trace.push_back(note(TraceStep::Kind::Witness, "stitch the reach strategy for B = " + to_string(b) +
                                                         " steps onto the sure-parity strategy"));
  out.yes = true;
  out.witness = Strategy(Stitched{sigma_pr, b, share(Strategy(sigma_phi))});
  seal(m, s0, p, true, opt, out);
  return out;
}

Verdict lex_optimize(const Mdp& m, const std::vector<std::size_t>& order, std::size_t s0,
                     const PipelineOptions& opt) {
  require_clean(m);
  Verdict out;
  Mdp cur = m;
  std::size_t c0 = s0;
  std::optional<ConjResult> conj;
  for (auto i : order) {
    if (i >= m.num_targets()) throw std::invalid_argument("target index out of range");
    Vector e(m.num_targets(), Rational(0));
    e[i] = 1;
    if (!project_and_prune(cur, c0, e, out.trace, &conj)) {
      out.trace.push_back(note(TraceStep::Kind::Note, "start state removed after optimising " + m.targets[i].name +
                                                          ": no lexicographic maximum"));
      return out;
    }
  }
  if (!conj) conj = conj_region(cur);
  out.yes = true;
  out.witness = Strategy(conj->strategy);
  const Vector reach = reach_vector(induce(m, *out.witness, s0, opt.materialize_cap));
  Vector best;
  for (auto i : order) best.push_back(reach[i]);
  out.optimum = best;
  seal(m, s0, exactly(reach), false, opt, out);

  const Integer mem = memory_size(*out.witness);
  const std::size_t bound = 2 * m.num_choices() * m.num_priorities();
  std::string summary = "witness memory " + to_string(mem) + " modes, bound 2|G||P| = " + std::to_string(bound);
  if (mem > bound) summary += " (exceeds the bound)";
  out.trace.push_back(note(TraceStep::Kind::Witness, summary));
  return out;
}

Verdict vertex_case(const Mdp& m, const Vector& p, std::size_t s0, const PipelineOptions& opt) {
  const Polytope poly = frontier(m, s0);
  if (!is_vertex(poly, p))
    throw GeometryError(GeometryError::Kind::NotAVertex, "point " + to_string(p) + " is not a frontier vertex");
  return vertex_case_traced(m, m, p, s0, poly, s0, {}, opt);
}

Strategy interior_case(const Mdp& m_pruned, const Vector& x, std::size_t s0, const PipelineOptions& opt) {
  const Polytope poly = frontier(m_pruned, s0);
  if (!relative_interior_test(poly.vertices, x))
    throw GeometryError(GeometryError::Kind::NotRelativelyInterior,
                        "point " + to_string(x) + " is not in the relative interior of the frontier vertices");
  const ConjResult conj = conj_region(m_pruned);
  if (!conj.states[s0]) throw CertificateFailure("interior case: start state fails the conjunction");
  const auto second = share(Strategy(conj.strategy));

  for (Integer k = m_pruned.size(); k <= opt.materialize_cap; k *= 2) {
    std::vector<Vector> z;
    std::vector<Strategy> parts;
    for (const auto& sigma : poly.vertex_strategies) {
      Strategy st(Stitched{sigma, k, second});
      z.push_back(reach_vector(induce(m_pruned, st, s0, opt.materialize_cap)));
      parts.push_back(std::move(st));
    }
    if (auto lambda = in_hull(z, x)) {
      Mixture mix;
      for (std::size_t j = 0; j < parts.size(); ++j)
        if (sgn((*lambda)[j]) > 0) mix.parts.emplace_back((*lambda)[j], share(parts[j]));
      return Strategy(std::move(mix));
    }
  }
  throw CertificateFailure("interior case did not converge below the materialisation cap");
}

Verdict decide_nonstrict(const Mdp& m, const Thresholds& p_in, std::size_t s0, const PipelineOptions& opt) {
  require_clean(m);
  Vector p;
  for (const auto& x : p_in) p.push_back(x.value_or(Rational(0)));
  const Thresholds full = exactly(p);

  std::vector<TraceStep> trace;
  trace.push_back(note(TraceStep::Kind::Clean, "model is clean for parity and targets"));
  const Achievability weak = achievable(m, s0, full, false, false);
  trace.push_back(note(TraceStep::Kind::Achievable, std::string("non-strict achievable: ") + (weak.yes ? "yes" : "no")));
  if (!weak.yes) {
    Verdict out;
    out.trace = std::move(trace);
    return out;
  }
  const Achievability strong = achievable(m, s0, p_in, true, false);
  trace.push_back(note(TraceStep::Kind::Achievable, std::string("strict achievable: ") + (strong.yes ? "yes" : "no")));
  if (strong.yes) {
    Verdict out = decide_strict(m, p_in, s0, opt);
    trace.insert(trace.end(), out.trace.begin(), out.trace.end());
    out.trace = std::move(trace);
    return out;
  }

  Mdp cur = m;
  std::size_t c0 = s0;
  Polytope poly = frontier(cur, c0);
  TraceStep fr = note(TraceStep::Kind::Frontier, "frontier with " + std::to_string(poly.vertices.size()) + " vertices");
  fr.points = poly.vertices;
  trace.push_back(std::move(fr));
  for (std::size_t round = 0; round <= m.num_targets() + 1; ++round) {
    if (is_vertex(poly, p)) return vertex_case_traced(m, cur, p, c0, poly, s0, std::move(trace), opt);

    Face face;
    try {
      face = smallest_face(poly, p);
    } catch (const GeometryError& e) {
      if (e.kind() == GeometryError::Kind::PointOutside) {
        trace.push_back(note(TraceStep::Kind::Note, "threshold lies outside the pruned frontier"));
        Verdict out;
        out.trace = std::move(trace);
        return out;
      }
      // Strictly inside the pruned set: strict thresholds are met there.
      Verdict out = decide_strict(cur, full, c0, opt);
      trace.insert(trace.end(), out.trace.begin(), out.trace.end());
      out.trace = std::move(trace);
      if (out.yes) seal(m, s0, full, false, opt, out);
      return out;
    }
    const Vector v = face_normal(poly, face);
    if (!project_and_prune(cur, c0, v, trace)) {
      trace.push_back(note(TraceStep::Kind::Note, "start state removed by pruning"));
      Verdict out;
      out.trace = std::move(trace);
      return out;
    }
    poly = frontier(cur, c0);
    TraceStep pf = note(TraceStep::Kind::Frontier, "pruned frontier with " + std::to_string(poly.vertices.size()) +
                                                       " vertices");
    pf.points = poly.vertices;
    trace.push_back(std::move(pf));
    if (auto y = dominating_interior_point(poly.vertices, p)) {
      std::string summary = "threshold is relatively interior: mix stitched strategies";
      if (*y != p) summary = "threshold is dominated by relatively interior point " + to_string(*y) + ": mix stitched strategies";
      trace.push_back(note(TraceStep::Kind::InteriorCase, summary));
      Verdict out;
      out.yes = true;
      out.witness = interior_case(cur, *y, c0, opt);
      out.trace = std::move(trace);
      seal(m, s0, full, false, opt, out);
      return out;
    }
  }
  throw CertificateFailure("non-strict pipeline did not terminate");
}

}  // namespace mopar
