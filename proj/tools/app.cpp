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

#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mopar/conj.hpp"
#include "mopar/errors.hpp"
#include "mopar/game.hpp"
#include "mopar/moreach.hpp"
#include "mopar/pareto.hpp"
#include "mopar/pipeline.hpp"
#include "mopar/text_format.hpp"
#include "mopar/verify.hpp"
#include "report.hpp"

namespace mopar::tools {

namespace {

struct Common {
  std::string model_path;
  std::string from;
  std::string format = "text";
  std::string cap = to_string(kDefaultMaterializeCap);
};

struct RunOptions {
  std::string query;
  std::string strategy_out;
  std::string frontier_out;
  bool auto_clean = false;
  std::optional<std::size_t> oracle_memory;
  std::optional<std::uint64_t> seed;
};

struct VerifyOptions {
  std::string strategy_path;
  std::string query;
  std::string expect;
};

struct SimulateOptions {
  std::string strategy_path;
  std::uint64_t episodes = 10000;
  std::uint64_t horizon = 1000;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Mdp load_model(const std::string& path) {
  try {
    return parse_mdp(read_file(path));
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.line(), e.column(), e.expected() + " (in " + path + ")");
  }
}

std::size_t start_state(const Mdp& m, const std::string& from) {
  if (!from.empty()) return m.state_index(from);
  if (!m.initial) throw std::runtime_error("model has no init line; pass --from <state>");
  return *m.initial;
}

Integer parse_cap(const std::string& text) {
  Integer cap;
  if (text.empty() || cap.set_str(text, 10) != 0 || cap < 0)
    throw std::runtime_error("--materialize-cap expects a natural number");
  return cap;
}

std::vector<std::string> names_of(const Mdp& m, const std::vector<bool>& set) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (set[s]) out.push_back(m.states[s]);
  return out;
}

std::vector<std::string> target_names(const Mdp& m) {
  std::vector<std::string> out;
  for (const auto& t : m.targets) out.push_back(t.name);
  return out;
}

void emit(std::ostream& out, const Report& r, const std::string& format) {
  if (format == "json")
    out << to_json(r).dump(2) << '\n';
  else
    write_text(out, r);
}

// Independent re-check of a produced witness on the input model.
void recheck(Report& r, const Mdp& m, const Strategy& sigma, std::size_t s0, const Requirement& req,
             const Integer& cap) {
  VerificationRecord rec = verify_strategy(m, sigma, s0, req, cap);
  if (!rec.all_pass) {
    std::string why;
    for (const auto& c : rec.checks)
      if (!c.pass) why += (why.empty() ? "" : "; ") + c.name + ": " + c.detail;
    throw CertificateFailure("witness failed its re-check: " + why);
  }
  r.strategy = summarize(sigma, m);
  if (!r.achieved) {
    r.achieved = rec.reach;
    r.achieved_is_lower_bound = rec.certified_mode;
  }
  r.verification = std::move(rec);
}

void sanity_simulation(Report& r, const Mdp& m, const Strategy& sigma, std::size_t s0, std::uint64_t seed,
                       const Integer& cap) {
  try {
    const MarkovChain c = induce(m, sigma, s0, cap);
    const SimulationResult sim = simulate(c, 10000, 1000, seed);
    r.simulation = SimulationSummary{sim.episodes, sim.horizon, seed, sim.hits};
    r.notes.push_back("simulation samples bounded reachability only; sure parity cannot be sampled");
  } catch (const MaterializationCapExceeded&) {
    r.notes.push_back("simulation skipped: witness exceeds the materialisation cap");
  }
}

void run_oracle(Report& r, const Mdp& m, std::size_t memory) {
  OracleComparison o;
  o.memory_bound = memory;
  const ConjResult conj = conj_region(m);
  o.conj_region = names_of(m, conj.states);
  try {
    o.brute_force = names_of(m, brute_force_conj(m, memory));
    o.agree = o.conj_region == o.brute_force;
    if (!*o.agree) r.notes.push_back("oracle disagreement: game solution and strategy enumeration differ");
  } catch (const BudgetExceeded& e) {
    o.error = e.what();
  }
  r.oracle = std::move(o);
}

int cmd_run(const Common& c, const RunOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = "run";
  r.model = c.model_path;
  const Mdp m = load_model(c.model_path);
  const std::size_t s0 = start_state(m, c.from);
  const Integer cap = parse_cap(c.cap);
  PipelineOptions popt;
  popt.materialize_cap = cap;

  r.start = m.states[s0];
  r.query_text = o.query;
  r.query = parse_query(o.query);
  const Query& q = *r.query;
  r.targets = target_names(m);
  const Thresholds p = resolve_thresholds(q, m);
  const std::vector<std::size_t> order = resolve_order(q, m);

  Mdp work = m;
  std::optional<std::size_t> ws0 = s0;
  if (o.auto_clean && q.parity) {
    const ParityRegion region = sure_parity_region(m);
    std::vector<bool> removed(m.size());
    for (std::size_t s = 0; s < m.size(); ++s) removed[s] = !region.states[s];
    r.parity_removed = names_of(m, removed);
    work = clean_wrt_parity(m);
    ws0 = work.find_state(m.states[s0]);
  } else if (o.auto_clean) {
    r.notes.push_back("--auto-clean-parity ignored: the query has no parity objective");
  }

  int code = kExitYes;
  auto finish = [&]() {
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(out, r, c.format);
    return code;
  };

  if (!ws0) {
    r.verdict = "no";
    r.notes.push_back("start state " + m.states[s0] + " cannot satisfy the parity objective surely");
    code = kExitNo;
    return finish();
  }

  const CleanReport clean = check_clean_targets(work);
  if (!clean.clean) throw NotClean(NotClean::Kind::Targets, clean.offenders);

  if (o.oracle_memory) run_oracle(r, work, *o.oracle_memory);

  std::optional<Strategy> witness;
  Requirement req;
  req.sure_parity = q.parity;

  switch (q.mode) {
    case Query::Mode::Frontier: {
      r.frontier = frontier(work, *ws0);
      r.verdict = "frontier";
      if (!o.frontier_out.empty()) {
        write_file(o.frontier_out, frontier_csv(*r.frontier, r.targets));
        if (r.frontier->dim == 2) {
          write_file(std::filesystem::path(o.frontier_out).replace_extension(".svg").string(),
                     frontier_svg(*r.frontier, r.targets));
        }
      }
      return finish();
    }
    case Query::Mode::Lex: {
      Verdict v = lex_optimize(work, order, *ws0, popt);
      r.trace = v.trace;
      r.verdict = v.yes ? "yes" : "no";
      if (v.yes) {
        r.optimum = v.optimum;
        for (auto i : order) r.optimum_targets.push_back(m.targets[i].name);
        req.thresholds.assign(m.num_targets(), std::nullopt);
        for (std::size_t k = 0; k < order.size(); ++k) req.thresholds[order[k]] = (*v.optimum)[k];
        witness = v.witness;
        r.achieved = v.achieved;
      }
      break;
    }
    case Query::Mode::Strict:
    case Query::Mode::NonStrict: {
      const bool strict = q.mode == Query::Mode::Strict;
      req.thresholds = p;
      req.strict = strict;
      if (q.parity) {
        Verdict v = strict ? decide_strict(work, p, *ws0, popt) : decide_nonstrict(work, p, *ws0, popt);
        r.trace = v.trace;
        r.verdict = v.yes ? "yes" : "no";
        if (v.yes) {
          witness = v.witness;
          r.achieved = v.achieved;
        }
      } else {
        const Achievability a = achievable(work, *ws0, p, strict);
        r.verdict = a.yes ? "yes" : "no";
        if (a.yes) {
          const OccupationLp occ = build_occupation_lp(work, *ws0);
          witness = Strategy(extract_memoryless(work, occ, a.occupation));
        }
        r.notes.push_back("no parity objective: decided by the occupation-measure LP alone");
      }
      break;
    }
  }

  if (r.verdict == "yes") {
    if (!witness) throw CertificateFailure("yes verdict without a witness");
    recheck(r, m, *witness, s0, req, cap);
    if (!o.strategy_out.empty()) write_file(o.strategy_out, export_strategy(*witness));
    if (o.seed) sanity_simulation(r, m, *witness, s0, *o.seed, cap);
  } else {
    code = kExitNo;
  }
  return finish();
}

int cmd_verify(const Common& c, const VerifyOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = "verify";
  r.model = c.model_path;
  const Mdp m = load_model(c.model_path);
  const std::size_t s0 = start_state(m, c.from);
  r.start = m.states[s0];
  r.targets = target_names(m);
  r.query_text = o.query;
  r.query = parse_query(o.query);
  if (r.query->mode == Query::Mode::Lex || r.query->mode == Query::Mode::Frontier)
    throw QueryError(QueryError::Kind::QuerySyntax, "verify needs a threshold or parity query");
  if (!o.expect.empty() && o.expect != "pass" && o.expect != "fail")
    throw std::runtime_error("--expect takes 'pass' or 'fail'");

  const Strategy sigma = import_strategy(read_file(o.strategy_path));
  Requirement req;
  req.sure_parity = r.query->parity;
  req.thresholds = resolve_thresholds(*r.query, m);
  req.strict = r.query->mode == Query::Mode::Strict;
  VerificationRecord rec = verify_strategy(m, sigma, s0, req, parse_cap(c.cap));
  r.verdict = rec.all_pass ? "pass" : "fail";
  r.strategy = summarize(sigma, m);
  if (!rec.reach.empty()) {
    r.achieved = rec.reach;
    r.achieved_is_lower_bound = rec.certified_mode;
  }
  r.verification = std::move(rec);
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(out, r, c.format);
  if (!o.expect.empty() && o.expect != r.verdict)
    throw CertificateFailure("expected " + o.expect + " but the strategy checks as " + r.verdict);
  return r.verification->all_pass ? kExitYes : kExitNo;
}

int cmd_simulate(const Common& c, const SimulateOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.command = "simulate";
  r.model = c.model_path;
  const Mdp m = load_model(c.model_path);
  const std::size_t s0 = start_state(m, c.from);
  r.start = m.states[s0];
  r.targets = target_names(m);
  const Strategy sigma = import_strategy(read_file(o.strategy_path));
  check_strategy(m, sigma);
  r.strategy = summarize(sigma, m);
  const MarkovChain chain = induce(m, sigma, s0, parse_cap(c.cap));
  const SimulationResult sim = simulate(chain, o.episodes, o.horizon, o.seed);
  r.simulation = SimulationSummary{sim.episodes, sim.horizon, o.seed, sim.hits};
  r.verdict = "simulated";
  r.notes.push_back("frequencies estimate bounded reachability only; sure parity cannot be sampled");
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(out, r, c.format);
  return kExitYes;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sure parity with multiple reachability thresholds on finite MDPs", "mopar"};
  app.require_subcommand(1);

  Common common;
  RunOptions run;
  VerifyOptions ver;
  SimulateOptions sim;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", common.model_path, "Model file")->required();
    sub->add_option("--from", common.from, "Start state (default: the model's init line)");
    sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--materialize-cap", common.cap, "Largest stitched horizon expanded into the product chain");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Decide a query and synthesise a witness");
  add_common(run_cmd);
  run_cmd->add_option("--query,-q", run.query, "Query text")->required();
  run_cmd->add_option("--strategy", run.strategy_out, "Write the witness strategy here");
  run_cmd->add_option("--frontier-out", run.frontier_out, "Write frontier vertices as CSV (and SVG for two targets)");
  run_cmd->add_flag("--auto-clean-parity", run.auto_clean, "Remove states without a sure parity strategy first");
  run_cmd->add_option("--oracle-memory", run.oracle_memory, "Cross-check the conjunction game by enumeration");
  run_cmd->add_option("--seed", run.seed, "Also simulate the witness with this seed");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a strategy file against a query");
  add_common(verify_cmd);
  verify_cmd->add_option("strategy", ver.strategy_path, "Strategy file")->required();
  verify_cmd->add_option("--query,-q", ver.query, "Query text")->required();
  verify_cmd->add_option("--expect", ver.expect, "Exit 2 unless the outcome is 'pass' or 'fail' as given");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of bounded reachability");
  add_common(sim_cmd);
  sim_cmd->add_option("strategy", sim.strategy_path, "Strategy file")->required();
  sim_cmd->add_option("--episodes", sim.episodes, "Number of runs");
  sim_cmd->add_option("--horizon", sim.horizon, "Steps per run");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(common, run, out);
    if (*verify_cmd) return cmd_verify(common, ver, out);
    return cmd_simulate(common, sim, out);
  } catch (const NotClean& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == NotClean::Kind::Parity) err << "hint: --auto-clean-parity removes these states first\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace mopar::tools
