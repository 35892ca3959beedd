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

#include "mopar/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mopar/errors.hpp"

namespace mopar {

namespace {

struct Token {
  std::string text;
  std::size_t col = 1;  // 1-based
};

struct Line {
  std::size_t number = 1;
  std::size_t end_col = 1;  // column just past the last character
  std::vector<Token> toks;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line;
    line.number = number;
    line.end_col = raw.size() + 1;
    for (std::size_t i = 0; i < raw.size();) {
      if (is_space(raw[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !is_space(raw[j])) ++j;
      line.toks.push_back({std::string(raw.substr(i, j - i)), i + 1});
      i = j;
    }
    if (!line.toks.empty()) out.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
    ++number;
  }
  return out;
}

[[noreturn]] void fail_at(const Line& l, std::size_t i, const std::string& expected) {
  const std::size_t col = i < l.toks.size() ? l.toks[i].col : l.end_col;
  throw SyntaxError(l.number, col, expected);
}

const std::string& need(const Line& l, std::size_t i, const std::string& expected) {
  if (i >= l.toks.size()) fail_at(l, i, expected);
  return l.toks[i].text;
}

void keyword(const Line& l, std::size_t i, const std::string& word) {
  if (i >= l.toks.size() || l.toks[i].text != word) fail_at(l, i, "'" + word + "'");
}

void no_more(const Line& l, std::size_t i) {
  if (i < l.toks.size()) fail_at(l, i, "end of line");
}

unsigned parse_nat(const Line& l, std::size_t i) {
  const std::string& t = need(l, i, "natural number");
  unsigned v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) fail_at(l, i, "natural number");
  return v;
}

Integer parse_integer(const Line& l, std::size_t i) {
  const std::string& t = need(l, i, "natural number");
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
    fail_at(l, i, "natural number");
  return Integer(t);
}

std::size_t parse_index(const Line& l, std::size_t i) {
  const std::string& t = need(l, i, "natural number");
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) fail_at(l, i, "natural number");
  return v;
}

Rational rational_at(const Line& l, std::size_t i, std::size_t offset, std::string_view text, const std::string& what) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw SyntaxError(l.number, l.toks[i].col + offset, what);
  }
}

// Splits "name:weight" at the last colon.
std::pair<std::string, Rational> weighted(const Line& l, std::size_t i, const std::string& what) {
  const std::string& t = need(l, i, what);
  const auto colon = t.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == t.size()) fail_at(l, i, what);
  return {t.substr(0, colon), rational_at(l, i, colon + 1, std::string_view(t).substr(colon + 1), "rational weight")};
}

// Renumbers actions by first use, scanning states in order and each state's
// choices by their current index. parse(print(m)) then reproduces the table.
Mdp canonical_actions(Mdp m) {
  std::vector<std::size_t> remap(m.actions.size(), m.actions.size());
  std::vector<std::string> table;
  for (const auto& cs : m.enabled)
    for (const auto& c : cs)
      if (remap[c.action] == m.actions.size()) {
        remap[c.action] = table.size();
        table.push_back(m.actions[c.action]);
      }
  for (auto& cs : m.enabled) {
    for (auto& c : cs) c.action = remap[c.action];
    std::sort(cs.begin(), cs.end(), [](const Choice& a, const Choice& b) { return a.action < b.action; });
  }
  m.actions = std::move(table);
  return m;
}

}  // namespace

Mdp parse_mdp(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw SyntaxError(1, 1, "a state or sink declaration");

  Mdp raw;
  std::map<std::string, std::size_t> index;
  std::set<std::size_t> sinks;
  std::optional<std::vector<std::string>> fixed_targets;
  std::map<std::string, std::size_t> target_index;
  const Line* init_line = nullptr;
  std::vector<const Line*> acts;

  auto add_target = [&](const std::string& name) -> std::size_t {
    auto it = target_index.find(name);
    if (it != target_index.end()) return it->second;
    target_index.emplace(name, raw.targets.size());
    raw.targets.push_back({name, {}});
    return raw.targets.size() - 1;
  };

  // Pass 1: declarations.
  for (const auto& l : lines) {
    const std::string& head = l.toks[0].text;
    if (head == "state" || head == "sink") {
      const std::string& name = need(l, 1, "state identifier");
      keyword(l, 2, "priority");
      const unsigned prio = parse_nat(l, 3);
      const std::size_t s = raw.states.size();
      raw.states.push_back(name);
      raw.priority.push_back(prio);
      raw.enabled.emplace_back();
      index.emplace(name, s);  // duplicates are reported by validate_mdp
      std::size_t i = 4;
      if (head == "sink") {
        sinks.insert(s);
        if (i < l.toks.size()) {
          keyword(l, i, "target");
          ++i;
          if (i >= l.toks.size()) fail_at(l, i, "target name");
          for (; i < l.toks.size(); ++i) {
            const std::string& t = l.toks[i].text;
            if (fixed_targets && !target_index.count(t)) fail_at(l, i, "a target listed on the targets line");
            raw.targets[add_target(t)].states.push_back(s);
          }
        }
      }
      no_more(l, i);
    } else if (head == "targets") {
      if (fixed_targets) fail_at(l, 0, "a single targets line");
      if (!raw.targets.empty()) fail_at(l, 0, "targets line before any sink declaration");
      fixed_targets.emplace();
      for (std::size_t i = 1; i < l.toks.size(); ++i) {
        if (target_index.count(l.toks[i].text)) fail_at(l, i, "distinct target names");
        fixed_targets->push_back(l.toks[i].text);
        add_target(l.toks[i].text);
      }
    } else if (head == "init") {
      if (init_line) fail_at(l, 0, "a single init line");
      need(l, 1, "state identifier");
      no_more(l, 2);
      init_line = &l;
    } else if (head == "act") {
      acts.push_back(&l);
    } else {
      fail_at(l, 0, "'state', 'sink', 'init', 'act' or 'targets'");
    }
  }
  if (raw.states.empty()) throw SyntaxError(lines.front().number, 1, "a state or sink declaration");

  auto lookup = [&](const Line& l, std::size_t i) {
    const std::string& name = need(l, i, "state identifier");
    auto it = index.find(name);
    if (it == index.end()) fail_at(l, i, "a declared state");
    return it->second;
  };

  // Pass 2: transitions.
  std::map<std::string, std::size_t> action_index;
  auto action = [&](const std::string& a) {
    auto [it, fresh] = action_index.emplace(a, raw.actions.size());
    if (fresh) raw.actions.push_back(a);
    return it->second;
  };
  for (const Line* lp : acts) {
    const Line& l = *lp;
    const std::size_t s = lookup(l, 1);
    if (sinks.count(s)) fail_at(l, 1, "a non-sink state (sinks carry the implicit '*' self-loop)");
    const std::string& a = need(l, 2, "action identifier");
    if (a == kSinkAction) fail_at(l, 2, "an action other than '*'");
    if (l.toks.size() < 4) fail_at(l, 3, "successor:probability");
    Choice c;
    c.action = action(a);
    for (std::size_t i = 3; i < l.toks.size(); ++i) {
      auto [succ, w] = weighted(l, i, "successor:probability");
      auto it = index.find(succ);
      if (it == index.end()) throw SyntaxError(l.number, l.toks[i].col, "a declared state");
      c.dist.emplace_back(it->second, w);
    }
    raw.enabled[s].push_back(std::move(c));
  }
  for (std::size_t s : sinks) raw.enabled[s].push_back({action(std::string(kSinkAction)), {{s, Rational(1)}}});
  if (init_line) raw.initial = lookup(*init_line, 1);

  return canonical_actions(validate_mdp(std::move(raw)));
}

std::string print_mdp(const Mdp& m) {
  std::ostringstream out;
  if (m.num_targets() > 0) {
    out << "targets";
    for (const auto& t : m.targets) out << ' ' << t.name;
    out << '\n';
  }
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.is_sink(s)) {
      out << "sink " << m.states[s] << " priority " << m.priority[s];
      const auto flags = m.target_flags(s);
      bool first = true;
      for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) {
          out << (first ? " target " : " ") << m.targets[i].name;
          first = false;
        }
      out << '\n';
    } else {
      out << "state " << m.states[s] << " priority " << m.priority[s] << '\n';
    }
  }
  if (m.initial) out << "init " << m.states[*m.initial] << '\n';
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.is_sink(s)) continue;
    for (const auto& c : m.enabled[s]) {
      out << "act " << m.states[s] << ' ' << m.actions[c.action];
      for (const auto& [t, w] : c.dist) out << ' ' << m.states[t] << ':' << to_string(w);
      out << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Queries

const char* to_string(Query::Mode mode) {
  switch (mode) {
    case Query::Mode::Strict: return "strict";
    case Query::Mode::NonStrict: return "non-strict";
    case Query::Mode::Lex: return "lex";
    case Query::Mode::Frontier: return "frontier";
  }
  return "?";
}

namespace {

struct QTok {
  std::string text;
  std::size_t col;
};

std::vector<QTok> lex_query(std::string_view q) {
  std::vector<QTok> out;
  for (std::size_t i = 0; i < q.size();) {
    const char c = q[i];
    if (is_space(c) || c == '\n') {
      ++i;
    } else if (c == '[' || c == ']' || c == ',') {
      out.push_back({std::string(1, c), i + 1});
      ++i;
    } else if (c == '>') {
      const bool ge = i + 1 < q.size() && q[i + 1] == '=';
      out.push_back({ge ? ">=" : ">", i + 1});
      i += ge ? 2 : 1;
    } else {
      std::size_t j = i;
      while (j < q.size() && !is_space(q[j]) && q[j] != '\n' && q[j] != '[' && q[j] != ']' && q[j] != ',' &&
             q[j] != '>')
        ++j;
      out.push_back({std::string(q.substr(i, j - i)), i + 1});
      i = j;
    }
  }
  return out;
}

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : toks_(lex_query(text)), end_col_(text.size() + 1) {}

  Query parse() {
    Query q;
    if (toks_.empty()) fail("a query");
    if (peek("FRONTIER")) {
      ++pos_;
      q.mode = Query::Mode::Frontier;
      done();
      return q;
    }
    if (peek("SURE")) {
      ++pos_;
      expect("parity");
      q.parity = true;
      if (pos_ == toks_.size()) return q;
      if (peek("LEXMAX")) {
        ++pos_;
        q.mode = Query::Mode::Lex;
        q.order = target_list();
        done();
        return q;
      }
      expect("AND");
    }
    if (peek("LEXMAX")) throw QueryError(QueryError::Kind::QuerySyntax, "LEXMAX requires the 'SURE parity' prefix");
    std::optional<bool> strict;
    bool mixed = false;
    std::set<std::string> seen;
    for (;;) {
      expect("P");
      const QTok& rel = next("'>' or '>='");
      if (rel.text != ">" && rel.text != ">=") fail_tok(rel, "'>' or '>='");
      const bool s = rel.text == ">";
      if (strict && *strict != s) mixed = true;
      strict = s;
      const QTok& num = next("a rational threshold");
      Rational p;
      try {
        p = parse_rational(num.text);
      } catch (const std::invalid_argument&) {
        fail_tok(num, "a rational threshold");
      }
      if (sgn(p) < 0 || p > 1)
        throw QueryError(QueryError::Kind::QuerySyntax,
                         "column " + std::to_string(num.col) + ": threshold " + to_string(p) + " outside [0,1]");
      expect("[");
      const QTok& name = next("a target name");
      if (name.text == "]" || name.text == "[" || name.text == ",") fail_tok(name, "a target name");
      expect("]");
      if (!seen.insert(name.text).second)
        throw QueryError(QueryError::Kind::QuerySyntax,
                         "column " + std::to_string(name.col) + ": target " + name.text + " constrained twice");
      q.thresholds.emplace_back(name.text, p);
      if (pos_ == toks_.size()) break;
      expect("AND");
    }
    if (mixed)
      throw QueryError(QueryError::Kind::MixedStrictness,
                       "mixing '>' and '>=' is outside the scope of this tool: use all-strict or all-non-strict "
                       "thresholds");
    q.mode = *strict ? Query::Mode::Strict : Query::Mode::NonStrict;
    return q;
  }

 private:
  std::vector<QTok> toks_;
  std::size_t end_col_;
  std::size_t pos_ = 0;

  bool peek(const char* word) const { return pos_ < toks_.size() && toks_[pos_].text == word; }

  [[noreturn]] void fail(const std::string& expected) const {
    const std::size_t col = pos_ < toks_.size() ? toks_[pos_].col : end_col_;
    throw QueryError(QueryError::Kind::QuerySyntax, "column " + std::to_string(col) + ": expected " + expected);
  }
  [[noreturn]] static void fail_tok(const QTok& t, const std::string& expected) {
    throw QueryError(QueryError::Kind::QuerySyntax, "column " + std::to_string(t.col) + ": expected " + expected);
  }

  const QTok& next(const std::string& expected) {
    if (pos_ >= toks_.size()) fail(expected);
    return toks_[pos_++];
  }
  void expect(const char* word) {
    if (!peek(word)) fail(std::string("'") + word + "'");
    ++pos_;
  }
  void done() const {
    if (pos_ != toks_.size()) fail("end of query");
  }

  std::vector<std::string> target_list() {
    expect("[");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (;;) {
      const QTok& name = next("a target name");
      if (name.text == "]" || name.text == "[" || name.text == ",") fail_tok(name, "a target name");
      if (!seen.insert(name.text).second)
        throw QueryError(QueryError::Kind::QuerySyntax,
                         "column " + std::to_string(name.col) + ": target " + name.text + " listed twice");
      out.push_back(name.text);
      if (peek("]")) {
        ++pos_;
        return out;
      }
      expect(",");
    }
  }
};

}  // namespace

Query parse_query(std::string_view text) { return QueryParser(text).parse(); }

std::string print_query(const Query& q) {
  if (q.mode == Query::Mode::Frontier) return "FRONTIER";
  std::string out = q.parity ? "SURE parity" : "";
  if (q.mode == Query::Mode::Lex) {
    out += " LEXMAX [";
    for (std::size_t i = 0; i < q.order.size(); ++i) out += (i ? ", " : "") + q.order[i];
    return out + "]";
  }
  const char* rel = q.mode == Query::Mode::Strict ? ">" : ">=";
  for (const auto& [name, p] : q.thresholds) {
    if (!out.empty()) out += " AND ";
    out += std::string("P") + rel + to_string(p) + " [" + name + "]";
  }
  return out;
}

namespace {

std::size_t target_of(const Mdp& m, const std::string& name) {
  if (auto i = m.find_target(name)) return *i;
  std::string known;
  for (const auto& t : m.targets) known += (known.empty() ? "" : ", ") + t.name;
  throw QueryError(QueryError::Kind::UnknownTarget, "unknown target '" + name + "' (model targets: " + known + ")");
}

}  // namespace

Thresholds resolve_thresholds(const Query& q, const Mdp& m) {
  Thresholds p(m.num_targets());
  for (const auto& [name, value] : q.thresholds) p[target_of(m, name)] = value;
  return p;
}

std::vector<std::size_t> resolve_order(const Query& q, const Mdp& m) {
  std::vector<std::size_t> order;
  for (const auto& name : q.order) order.push_back(target_of(m, name));
  return order;
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

void indent(std::ostringstream& out, int depth) { out << std::string(2 * static_cast<std::size_t>(depth), ' '); }

void write_dist(std::ostringstream& out, const ActionDist& d) {
  for (const auto& [a, w] : d) out << ' ' << a << ':' << to_string(w);
}

void write(std::ostringstream& out, const Strategy& s, int depth) {
  if (const auto* m = std::get_if<Memoryless>(&s.v)) {
    indent(out, depth);
    out << "memoryless\n";
    for (const auto& [state, d] : m->choice) {
      indent(out, depth + 1);
      out << state;
      write_dist(out, d);
      out << '\n';
    }
  } else if (const auto* f = std::get_if<Fsm>(&s.v)) {
    indent(out, depth);
    out << "fsm " << f->modes << " initial " << f->initial << '\n';
    for (const auto& [key, rule] : f->rules) {
      indent(out, depth + 1);
      out << key.first << ' ' << key.second << " -> " << rule.next;
      write_dist(out, rule.out);
      out << '\n';
    }
  } else if (const auto* st = std::get_if<Stitched>(&s.v)) {
    indent(out, depth);
    out << "stitched " << to_string(st->horizon) << '\n';
    write(out, Strategy(st->first), depth + 1);
    write(out, *st->second, depth + 1);
  } else {
    const auto& mix = std::get<Mixture>(s.v);
    indent(out, depth);
    out << "mixture " << mix.parts.size() << '\n';
    for (const auto& [w, part] : mix.parts) {
      indent(out, depth + 1);
      out << "weight " << to_string(w) << '\n';
      write(out, *part, depth + 1);
    }
  }
  indent(out, depth);
  out << "end\n";
}

class StrategyReader {
 public:
  explicit StrategyReader(std::string_view text) : lines_(split_lines(text)) {}

  Strategy read() {
    if (lines_.empty()) throw SyntaxError(1, 1, "'strategy v1'");
    const Line& h = lines_[0];
    keyword(h, 0, "strategy");
    keyword(h, 1, "v1");
    no_more(h, 2);
    pos_ = 1;
    Strategy s = block();
    if (pos_ < lines_.size()) fail_at(lines_[pos_], 0, "end of file");
    return s;
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;

  const Line& line(const std::string& expected) {
    if (pos_ >= lines_.size()) {
      const std::size_t n = lines_.empty() ? 1 : lines_.back().number + 1;
      throw SyntaxError(n, 1, expected);
    }
    return lines_[pos_++];
  }

  bool at_end() const { return pos_ < lines_.size() && lines_[pos_].toks[0].text == "end"; }

  void end() {
    const Line& l = line("'end'");
    keyword(l, 0, "end");
    no_more(l, 1);
  }

  ActionDist dist(const Line& l, std::size_t from) {
    ActionDist d;
    for (std::size_t i = from; i < l.toks.size(); ++i) d.push_back(weighted(l, i, "action:weight"));
    return d;
  }

  Strategy block() {
    const Line& l = line("a strategy block");
    const std::string& kind = l.toks[0].text;
    if (kind == "memoryless") {
      no_more(l, 1);
      return memoryless_body();
    }
    if (kind == "fsm") {
      Fsm f;
      f.modes = parse_index(l, 1);
      keyword(l, 2, "initial");
      f.initial = parse_index(l, 3);
      no_more(l, 4);
      while (!at_end()) {
        const Line& r = line("an fsm rule");
        const std::size_t q = parse_index(r, 0);
        const std::string& state = need(r, 1, "state identifier");
        keyword(r, 2, "->");
        FsmRule rule;
        rule.next = parse_index(r, 3);
        rule.out = dist(r, 4);
        if (!f.rules.emplace(std::make_pair(q, state), std::move(rule)).second) fail_at(r, 0, "a new (mode, state) pair");
      }
      end();
      return Strategy(std::move(f));
    }
    if (kind == "stitched") {
      Stitched st;
      st.horizon = parse_integer(l, 1);
      no_more(l, 2);
      const Line& first = line("'memoryless'");
      keyword(first, 0, "memoryless");
      no_more(first, 1);
      st.first = std::get<Memoryless>(memoryless_body().v);
      st.second = share(block());
      end();
      return Strategy(std::move(st));
    }
    if (kind == "mixture") {
      const std::size_t count = parse_index(l, 1);
      no_more(l, 2);
      Mixture mix;
      for (std::size_t k = 0; k < count; ++k) {
        const Line& w = line("'weight'");
        keyword(w, 0, "weight");
        const std::string& t = need(w, 1, "rational weight");
        const Rational r = rational_at(w, 1, 0, t, "rational weight");
        no_more(w, 2);
        mix.parts.emplace_back(r, share(block()));
      }
      end();
      return Strategy(std::move(mix));
    }
    fail_at(l, 0, "'memoryless', 'fsm', 'stitched' or 'mixture'");
  }

  Strategy memoryless_body() {
    Memoryless m;
    while (!at_end()) {
      const Line& r = line("a memoryless entry");
      const std::string& state = r.toks[0].text;
      if (r.toks.size() < 2) fail_at(r, 1, "action:weight");
      if (!m.choice.emplace(state, dist(r, 1)).second) fail_at(r, 0, "a state not listed before");
    }
    end();
    return Strategy(std::move(m));
  }
};

}  // namespace

std::string export_strategy(const Strategy& s) {
  std::ostringstream out;
  out << "strategy v1\n";
  write(out, s, 0);
  return out.str();
}

Strategy import_strategy(std::string_view text) { return StrategyReader(text).read(); }

}  // namespace mopar
