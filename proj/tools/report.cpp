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

#include "report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace mopar::tools {

using json = nlohmann::ordered_json;

namespace {

json exact(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json decimal(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_decimal(x));
  return a;
}

json vector_json(const Vector& v) { return {{"exact", exact(v)}, {"decimal", decimal(v)}, {"decimal_approximate", true}}; }

json names(const std::vector<std::string>& v) { return json(v); }

const Strategy* outer_stitched(const Strategy& s) {
  if (std::holds_alternative<Stitched>(s.v)) return &s;
  if (const auto* mix = std::get_if<Mixture>(&s.v))
    for (const auto& [w, part] : mix->parts)
      if (const Strategy* st = outer_stitched(*part)) return st;
  return nullptr;
}

std::string vec_text(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

std::string dec_text(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_decimal(v[i], 4);
  return out + ")";
}

}  // namespace

StrategySummary summarize(const Strategy& s, const Mdp& m) {
  StrategySummary out;
  out.kind = s.kind();
  out.memory = memory_size(s);
  if (const Strategy* st = outer_stitched(s)) out.horizon = std::get<Stitched>(st->v).horizon;
  out.memory_bound = 2 * m.num_choices() * m.num_priorities();
  out.exceeds_bound = out.memory > Integer(static_cast<unsigned long>(out.memory_bound));
  return out;
}

json to_json(const Report& r) {
  json j;
  j["schema"] = kReportSchema;
  j["command"] = r.command;
  j["model"] = r.model;
  j["start"] = r.start;
  if (r.query) {
    json q;
    q["text"] = r.query_text;
    q["mode"] = to_string(r.query->mode);
    q["parity"] = r.query->parity;
    json th = json::array();
    for (const auto& [name, p] : r.query->thresholds) th.push_back({{"target", name}, {"value", to_string(p)}});
    q["thresholds"] = th;
    q["order"] = names(r.query->order);
    j["query"] = q;
  } else {
    j["query"] = nullptr;
  }
  j["targets"] = names(r.targets);
  j["cleaning"] = {{"parity_removed", names(r.parity_removed)}};
  j["verdict"] = r.verdict;

  if (r.achieved) {
    j["achieved"] = vector_json(*r.achieved);
    j["achieved"]["lower_bound"] = r.achieved_is_lower_bound;
  } else {
    j["achieved"] = nullptr;
  }
  if (r.optimum) {
    j["optimum"] = vector_json(*r.optimum);
    j["optimum"]["order"] = names(r.optimum_targets);
  } else {
    j["optimum"] = nullptr;
  }

  if (r.strategy) {
    const auto& s = *r.strategy;
    j["strategy"] = {{"kind", s.kind},
                     {"memory", to_string(s.memory)},
                     {"horizon", s.horizon ? json(to_string(*s.horizon)) : json(nullptr)},
                     {"memory_bound", s.memory_bound},
                     {"exceeds_memory_bound", s.exceeds_bound}};
  } else {
    j["strategy"] = nullptr;
  }

  if (r.verification) {
    const auto& v = *r.verification;
    json checks = json::array();
    for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["verification"] = {{"all_pass", v.all_pass},
                         {"certified_mode", v.certified_mode},
                         {"exact", v.exact},
                         {"checks", checks},
                         {"reach", exact(v.reach)}};
  } else {
    j["verification"] = nullptr;
  }

  json trace = json::array();
  for (const auto& t : r.trace) {
    json e = {{"kind", to_string(t.kind)}, {"summary", t.summary}};
    e["direction"] = t.direction ? exact(*t.direction) : json(nullptr);
    e["states"] = names(t.states);
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back(exact(p));
    e["points"] = pts;
    trace.push_back(e);
  }
  j["trace"] = trace;

  if (r.frontier) {
    const auto& p = *r.frontier;
    json corners = json::array();
    for (const auto& v : p.pure_points) corners.push_back(exact(v));
    json extreme = json::array();
    for (const auto& v : p.vertices) extreme.push_back(exact(v));
    json facets = json::array();
    for (const auto& f : p.upper_facets) facets.push_back({{"normal", exact(f.normal)}, {"offset", to_string(f.offset)}});
    j["frontier"] = {{"dimension", p.dim}, {"vertices", corners},
                     {"extreme_points", extreme},
                     {"vertices_complete", p.pure_points_complete},
                     {"facets", facets}};
  } else {
    j["frontier"] = nullptr;
  }

  if (r.oracle) {
    const auto& o = *r.oracle;
    j["oracle"] = {{"memory_bound", o.memory_bound},
                   {"conj_region", names(o.conj_region)},
                   {"brute_force", names(o.brute_force)},
                   {"agree", o.agree ? json(*o.agree) : json(nullptr)},
                   {"error", o.error.empty() ? json(nullptr) : json(o.error)}};
  } else {
    j["oracle"] = nullptr;
  }

  if (r.simulation) {
    const auto& s = *r.simulation;
    json freq = json::array();
    for (auto h : s.hits)
      freq.push_back(s.episodes ? static_cast<double>(h) / static_cast<double>(s.episodes) : 0.0);
    j["simulation"] = {{"episodes", s.episodes}, {"horizon", s.horizon}, {"seed", s.seed},
                       {"hits", s.hits},         {"frequency", freq}, {"sure_properties_sampled", false}};
  } else {
    j["simulation"] = nullptr;
  }

  j["notes"] = names(r.notes);
  j["timing"] = {{"elapsed_ms", r.elapsed_ms}};
  return j;
}

void write_text(std::ostream& out, const Report& r) {
  out << "model:    " << r.model << " (start " << r.start << ")\n";
  if (r.query) out << "query:    " << print_query(*r.query) << '\n';
  if (!r.parity_removed.empty()) {
    out << "cleaning: removed";
    for (const auto& s : r.parity_removed) out << ' ' << s;
    out << " (no sure parity strategy)\n";
  }
  for (const auto& t : r.trace) {
    out << "  [" << to_string(t.kind) << "] " << t.summary;
    for (std::size_t i = 0; i < t.states.size(); ++i) out << (i ? ", " : ": ") << t.states[i];
    out << '\n';
  }
  out << "verdict:  " << r.verdict << '\n';
  if (r.achieved)
    out << (r.achieved_is_lower_bound ? "achieved: >= " : "achieved: ") << vec_text(*r.achieved) << "  ~ "
        << dec_text(*r.achieved) << '\n';
  if (r.optimum) {
    out << "optimum:  " << vec_text(*r.optimum) << " in order";
    for (const auto& t : r.optimum_targets) out << ' ' << t;
    out << '\n';
  }
  if (r.strategy) {
    const auto& s = *r.strategy;
    out << "strategy: " << s.kind << ", memory " << to_string(s.memory);
    if (s.horizon) out << ", horizon " << to_string(*s.horizon);
    if (s.exceeds_bound) out << " (above 2|G||P| = " << s.memory_bound << ')';
    out << '\n';
  }
  if (r.verification) {
    out << "checks:   " << (r.verification->all_pass ? "all pass" : "FAILED")
        << (r.verification->certified_mode ? " (certified mode)" : "") << '\n';
    for (const auto& c : r.verification->checks)
      out << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  if (r.frontier) {
    out << "frontier vertices:\n";
    for (const auto& v : r.frontier->pure_points) out << "  " << vec_text(v) << '\n';
    out << "upper facets:\n";
    for (const auto& f : r.frontier->upper_facets)
      out << "  " << vec_text(f.normal) << " . x <= " << to_string(f.offset) << '\n';
  }
  if (r.oracle) {
    const auto& o = *r.oracle;
    out << "oracle:   memory bound " << o.memory_bound << ", ";
    if (o.agree)
      out << (*o.agree ? "agrees with the game solution" : "DISAGREES with the game solution") << '\n';
    else
      out << "not run: " << o.error << '\n';
  }
  if (r.simulation) {
    const auto& s = *r.simulation;
    out << "simulation: " << s.episodes << " episodes, horizon " << s.horizon << ", seed " << s.seed << '\n';
    for (std::size_t i = 0; i < s.hits.size() && i < r.targets.size(); ++i)
      out << "  " << r.targets[i] << ": " << s.hits[i] << " hits ("
          << (s.episodes ? static_cast<double>(s.hits[i]) / static_cast<double>(s.episodes) : 0.0) << ")\n";
  }
  for (const auto& n : r.notes) out << "note: " << n << '\n';
}

std::string frontier_csv(const Polytope& p, const std::vector<std::string>& targets) {
  std::ostringstream out;
  for (std::size_t i = 0; i < targets.size(); ++i) out << (i ? "," : "") << targets[i];
  out << '\n';
  for (const auto& v : p.pure_points) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << to_string(v[i]);
    out << '\n';
  }
  return out.str();
}

std::string frontier_svg(const Polytope& p, const std::vector<std::string>& targets) {
  if (p.dim != 2) throw std::invalid_argument("SVG output needs exactly two targets");
  constexpr double size = 400, margin = 50;
  auto px = [&](const Rational& x) { return margin + size * x.get_d(); };
  auto py = [&](const Rational& y) { return margin + size * (1 - y.get_d()); };

  std::vector<Vector> v = p.vertices;
  std::sort(v.begin(), v.end(), [](const Vector& a, const Vector& b) { return a[0] < b[0]; });

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
      << size + 2 * margin << "\">\n";
  out << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  if (!v.empty()) {
    out << "  <polygon fill=\"#cfe0f3\" stroke=\"#1f4e8c\" stroke-width=\"2\" points=\"";
    out << px(0) << ',' << py(0) << ' ' << px(0) << ',' << py(v.front()[1]);
    for (const auto& q : v) out << ' ' << px(q[0]) << ',' << py(q[1]);
    out << ' ' << px(v.back()[0]) << ',' << py(0) << "\"/>\n";
  }
  for (const auto& q : p.pure_points) {
    out << "  <circle cx=\"" << px(q[0]) << "\" cy=\"" << py(q[1]) << "\" r=\"4\" fill=\"#1f4e8c\"/>\n";
    out << "  <text x=\"" << px(q[0]) + 6 << "\" y=\"" << py(q[1]) - 6 << "\" font-size=\"12\">(" << to_string(q[0])
        << ", " << to_string(q[1]) << ")</text>\n";
  }
  const std::string xl = targets.size() > 0 ? targets[0] : "x1";
  const std::string yl = targets.size() > 1 ? targets[1] : "x2";
  out << "  <text x=\"" << margin + size / 2 << "\" y=\"" << size + 1.7 * margin
      << "\" font-size=\"14\" text-anchor=\"middle\">Pr(&lt;&gt; " << xl << ")</text>\n";
  out << "  <text x=\"" << margin / 3 << "\" y=\"" << margin + size / 2 << "\" font-size=\"14\" transform=\"rotate(-90 "
      << margin / 3 << ' ' << margin + size / 2 << ")\" text-anchor=\"middle\">Pr(&lt;&gt; " << yl << ")</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace mopar::tools
