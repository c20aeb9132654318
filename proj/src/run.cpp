// Copyright 2026 The csgcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csgcheck/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "csgcheck/error.hpp"
#include "csgcheck/game_json.hpp"
#include "csgcheck/json_writer.hpp"
#include "csgcheck/matrix_game.hpp"
#include "csgcheck/property.hpp"
#include "csgcheck/strategy_eval.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {

LoadedModel load_model(const std::string& path, const ConstantBindings& bindings) {
  if (path.empty()) throw InputError("no model given (use --model)");
  const std::string text = read_file(path);
  LoadedModel out;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    if (!bindings.empty()) throw InputError("constant bindings do not apply to an explicit game");
    out.game = import_game(text);
    for (std::size_t v = 0; v < out.game.variable_names.size(); ++v) {
      out.scope.variables[out.game.variable_names[v]] = {static_cast<int>(v), Type::kInt};
    }
    return out;
  }
  ModelAst ast;
  try {
    ast = parse_model(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ": " + e.what());
  }
  ElaboratedModel em = elaborate(ast, bindings);
  out.game = std::move(em.game);
  out.scope = std::move(em.scope);
  return out;
}

ConstantBindings parse_bindings(const std::vector<std::string>& items) {
  ConstantBindings out;
  for (const auto& item : items) {
    for (const auto& part : split(item, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos || eq == 0) throw InputError("constant binding '" + part + "' is not name=value");
      out[std::string(trim(part.substr(0, eq)))] = std::string(trim(part.substr(eq + 1)));
    }
  }
  return out;
}

std::vector<std::string> sweep_values(const std::string& spec, std::string* name) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("--sweep expects name=lo:hi:step");
  *name = std::string(trim(spec.substr(0, eq)));
  auto parts = split(spec.substr(eq + 1), ':');
  if (parts.size() != 3) throw InputError("--sweep expects name=lo:hi:step");
  std::vector<std::string> values;
  try {
    long long lo = parse_integer(parts[0]);
    long long hi = parse_integer(parts[1]);
    long long step = parse_integer(parts[2]);
    if (step <= 0) throw InputError("sweep step must be positive");
    for (long long v = lo; v <= hi; v += step) values.push_back(std::to_string(v));
    return values;
  } catch (const InputError& e) {
    if (std::string(e.what()) == "sweep step must be positive") throw;
  }
  double lo = parse_double(parts[0]);
  double hi = parse_double(parts[1]);
  double step = parse_double(parts[2]);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) throw InputError("sweep range must be finite");
  if (step <= 0) throw InputError("sweep step must be positive");
  if (hi < lo) return values;
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1000000) throw InputError("sweep grid too large");
  for (long i = 0; i < count; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", lo + static_cast<double>(i) * step);
    values.push_back(buf);
  }
  return values;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

// 1e-04 -> 1e-4
std::string compact_number(double x) {
  char buf[40];
  for (int precision = 0; precision < 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*e", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  std::string out = buf;
  auto e = out.find('e');
  if (e == std::string::npos) return out;
  std::size_t digits = e + 1;
  if (digits < out.size() && (out[digits] == '-' || out[digits] == '+')) {
    if (out[digits] == '+') out.erase(digits, 1); else ++digits;
  }
  while (digits + 1 < out.size() && out[digits] == '0') out.erase(digits, 1);
  return out;
}

struct PropertyJob {
  std::string source;  // where it came from, for messages
  std::string text;
};

std::vector<PropertyJob> property_jobs(const RunConfig& cfg) {
  std::vector<PropertyJob> jobs;
  if (!cfg.props.empty()) {
    for (const auto& line : split_property_file(read_file(cfg.props))) {
      jobs.push_back({cfg.props + ":" + std::to_string(line.line), line.text});
    }
  }
  for (std::size_t i = 0; i < cfg.inline_props.size(); ++i) {
    jobs.push_back({"--prop " + std::to_string(i + 1), cfg.inline_props[i]});
  }
  if (jobs.empty()) throw InputError("no properties given (use --props or --prop)");
  return jobs;
}

Property prepare(const PropertyJob& job, const LoadedModel& model) {
  Property p;
  try {
    p = parse_property(job.text);
  } catch (const ParseError& e) {
    throw InputError(job.source + ": " + e.what());
  }
  try {
    p = resolve_property(p, model.scope);
  } catch (const InputError& e) {
    throw InputError(job.source + ": " + e.what());
  }
  auto diags = typecheck(p, model.game);
  if (!diags.empty()) throw InputError(job.source + ": " + join(diags, "; "));
  return p;
}

CheckOptions check_options(const RunConfig& cfg, bool synthesize) {
  CheckOptions opts;
  if (!(cfg.epsilon > 0)) throw InputError("--epsilon must be positive");
  if (cfg.max_iters < 1) throw InputError("--max-iters must be positive");
  if (cfg.threads < 1) throw InputError("--threads must be positive");
  opts.epsilon = cfg.epsilon;
  opts.max_iters = cfg.max_iters;
  opts.threads = cfg.threads;
  opts.synthesize = synthesize;
  return opts;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw InputError("cannot write '" + cfg.output + "'");
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

std::string values_text(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(format_number(v));
  return join(parts, ", ");
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  LoadedModel model = load_model(cfg.model, parse_bindings(cfg.constants));
  auto jobs = property_jobs(cfg);
  std::vector<Property> props;
  for (const auto& job : jobs) props.push_back(prepare(job, model));
  const bool exporting = !cfg.export_strategy.empty();
  if (exporting && props.size() != 1) throw InputError("--export-strategy needs exactly one property");
  Checker checker(model.game, check_options(cfg, exporting));

  std::vector<CheckResult> results;
  std::vector<double> times;
  bool all_true = true;
  for (const auto& p : props) {
    auto start = std::chrono::steady_clock::now();
    results.push_back(checker.check(p));
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (!results.back().numeric && !results.back().satisfied) all_true = false;
  }
  if (exporting) {
    if (!results[0].strategy) throw InputError("property has no strategy to export");
    write_file(cfg.export_strategy, export_strategy(*results[0].strategy, model.game));
  }

  std::ostringstream text;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["model"] = cfg.model;
    doc["states"] = model.game.num_states();
    ordered_json list = ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      ordered_json item;
      item["property"] = r.query;
      if (!r.values.empty()) {
        item["value"] = r.value;
        item["values"] = r.values;
      }
      if (!r.numeric) item["satisfied"] = r.satisfied;
      item["iterations"] = r.iterations;
      item["residual"] = r.residual;
      if (cfg.timing) item["wall_time"] = times[i];
      list.push_back(std::move(item));
    }
    doc["results"] = std::move(list);
    text << write_json(doc);
  } else if (cfg.format == "csv") {
    text << "property,value,satisfied\n";
    for (const auto& r : results) {
      text << csv_field(r.query) << ',' << (r.values.empty() ? "" : format_number(r.value)) << ','
           << (r.numeric ? "" : r.satisfied ? "true" : "false") << '\n';
    }
  } else {
    text << "model: " << cfg.model << " (" << model.game.num_states() << " states)\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      text << "\nproperty: " << r.query << '\n';
      if (!r.values.empty()) {
        text << "value: " << format_number(r.value);
        if (r.values.size() > 1) text << " (" << values_text(r.values) << ")";
        text << '\n';
      }
      if (!r.numeric) text << "result: " << (r.satisfied ? "true" : "false") << '\n';
      text << "iterations: " << r.iterations << ", residual: " << format_number(r.residual) << '\n';
      if (cfg.timing) text << "time: " << times[i] << " s\n";
    }
  }
  emit(cfg, text.str(), out);
  return static_cast<int>(all_true ? ExitCode::kOk : ExitCode::kPropertyFalse);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweep.empty()) throw InputError("sweep needs --sweep name=lo:hi:step");
  std::string name;
  auto grid = sweep_values(cfg.sweep, &name);
  auto jobs = property_jobs(cfg);
  ConstantBindings base = parse_bindings(cfg.constants);
  CheckOptions opts = check_options(cfg, false);
  std::ostringstream text;
  text << "constant,property,value,error\n";
  for (const auto& value : grid) {
    ConstantBindings bindings = base;
    bindings[name] = value;
    std::optional<LoadedModel> model;
    std::string model_error;
    try {
      model = load_model(cfg.model, bindings);
    } catch (const std::exception& e) {
      model_error = e.what();
    }
    for (const auto& job : jobs) {
      std::string cell, error = model_error;
      if (model) {
        try {
          Checker checker(model->game, opts);
          CheckResult r = checker.check(prepare(job, *model));
          cell = r.numeric ? format_number(r.value) : (r.satisfied ? "true" : "false");
        } catch (const std::exception& e) {
          error = e.what();
        }
      }
      text << csv_field(value) << ',' << csv_field(job.text) << ',' << cell << ',' << csv_field(error) << '\n';
    }
  }
  emit(cfg, text.str(), out);
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  if (cfg.import_strategy.empty()) throw InputError("eval needs --import-strategy");
  if (cfg.runs < 1) throw InputError("--runs must be at least 1");
  LoadedModel model = load_model(cfg.model, parse_bindings(cfg.constants));
  auto jobs = property_jobs(cfg);
  if (jobs.size() != 1) throw InputError("eval needs exactly one property");
  Property p = prepare(jobs[0], model);
  const GameFormula* g = p.root_game();
  if (!g) throw InputError("eval needs a game operator at the root of the property");
  Checker checker(model.game, check_options(cfg, false));
  SynthesizedStrategy st = import_strategy(read_file(cfg.import_strategy), model.game);
  Partition partition = resolve_coalitions(*g, model.game);
  CoalitionGame cg = build_coalition_game(model.game, partition);
  if (strategy_partition(st, model.game) != cg.coalitions) {
    throw InputError("strategy coalitions do not match the property");
  }
  const Direction dir = g->numeric ? g->direction : g->effective_direction();
  std::vector<CoalitionObjective> objectives;
  for (std::size_t i = 0; i < g->objectives.size(); ++i) {
    objectives.push_back({static_cast<int>(i), checker.objective_spec(g->objectives[i]), dir});
  }
  if (!g->equilibrium && cg.game.num_players() == 2) {
    objectives.push_back({1, objectives[0].spec, dir == Direction::kMax ? Direction::kMin : Direction::kMax});
  }
  InducedChain chain = induce_chain(cg.game, st);
  const std::size_t shown = g->equilibrium ? objectives.size() : 1;
  std::vector<double> exact;
  std::vector<SimulationResult> sims;
  for (std::size_t i = 0; i < shown; ++i) {
    exact.push_back(evaluate_exact(chain, cg.game, objectives[i].spec, st));
    sims.push_back(simulate(chain, cg.game, objectives[i].spec, cfg.runs, cfg.seed, 100000, cfg.threads));
  }
  DeviationReport rep = best_response_check(cg.game, st, objectives, cfg.certify_eps);
  double max_gain = 0.0;
  for (double x : rep.gains) max_gain = std::max(max_gain, x);
  std::string verdict = rep.certified ? "\u03b5-equilibrium (\u03b5 \u2264 " + compact_number(cfg.certify_eps) + ")"
                                      : "violated";

  std::ostringstream text;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["property"] = print_property(p);
    doc["chain_states"] = chain.size();
    ordered_json list = ordered_json::array();
    for (std::size_t i = 0; i < shown; ++i) {
      list.push_back({{"coalition", join(st.coalitions[objectives[i].coalition], ",")},
                      {"exact", exact[i]},
                      {"estimate", sims[i].mean},
                      {"half_width", sims[i].half_width},
                      {"runs", sims[i].runs},
                      {"seed", sims[i].seed},
                      {"truncated", sims[i].truncated}});
    }
    doc["objectives"] = std::move(list);
    doc["gains"] = rep.gains;
    doc["certified"] = rep.certified;
    doc["verdict"] = verdict;
    if (!rep.certified) {
      doc["violation"] = {{"coalition", join(st.coalitions[objectives[rep.worst].coalition], ",")},
                          {"state", rep.worst_state},
                          {"memory", rep.worst_memory}};
    }
    text << write_json(doc);
  } else {
    text << "property: " << print_property(p) << '\n';
    text << "induced chain: " << chain.size() << " states\n";
    for (std::size_t i = 0; i < shown; ++i) {
      text << "coalition " << join(st.coalitions[objectives[i].coalition], ",") << ": exact "
           << format_number(exact[i]) << ", simulated " << format_number(sims[i].mean) << " +- "
           << format_number(sims[i].half_width) << " (" << sims[i].runs << " runs, seed " << sims[i].seed;
      if (sims[i].truncated) text << ", " << sims[i].truncated << " truncated";
      text << ")\n";
    }
    text << "max deviation gain: " << format_number(max_gain) << '\n';
    text << "verdict: " << verdict;
    if (!rep.certified) {
      text << " (coalition " << join(st.coalitions[objectives[rep.worst].coalition], ",") << " gains "
           << format_number(rep.gains[rep.worst]) << " at state " << rep.worst_state << ")";
    }
    text << '\n';
  }
  emit(cfg, text.str(), out);
  return static_cast<int>(rep.certified ? ExitCode::kOk : ExitCode::kPropertyFalse);
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  LoadedModel model = load_model(cfg.model, parse_bindings(cfg.constants));
  emit(cfg, export_game(model.game), out);
  return 0;
}

struct NfgConfig {
  std::string game;
  std::string kind = "ne";
  std::string criterion = "sw";
  std::string direction = "max";
  bool matrix = false;
};

int cmd_nfg(const RunConfig& cfg, const NfgConfig& nc, std::ostream& out) {
  NormalFormGame game = parse_nfg_table(read_file(nc.game));
  std::ostringstream text;
  auto strategy_line = [&](int p, const MixedStrategy& d) {
    std::vector<std::string> parts;
    for (int a = 0; a < game.num_actions(p); ++a) parts.push_back(game.action_names(p)[a] + "=" + format_number(d[a]));
    return join(parts, " ");
  };
  if (nc.matrix) {
    if (game.num_players() != 2) throw InputError("--matrix needs a two-player game");
    Matrix z(game.num_actions(0), std::vector<double>(game.num_actions(1)));
    for (int i = 0; i < game.num_actions(0); ++i) {
      for (int j = 0; j < game.num_actions(1); ++j) z[i][j] = game.utility(game.index(std::vector<int>{i, j}), 0);
    }
    GameSolution sol = solve_matrix_game(z);
    if (cfg.format == "json") {
      ordered_json doc{{"value", sol.value}, {"row", sol.row}, {"column", sol.col}};
      text << write_json(doc);
    } else {
      text << "value: " << format_number(sol.value) << "\nrow: " << strategy_line(0, sol.row)
           << "\ncolumn: " << strategy_line(1, sol.col) << '\n';
    }
    emit(cfg, text.str(), out);
    return 0;
  }
  EquilibriumKind kind;
  if (nc.kind == "ne") kind = EquilibriumKind::kNash;
  else if (nc.kind == "ce") kind = EquilibriumKind::kCorrelated;
  else throw InputError("--kind must be ne or ce");
  Criterion criterion;
  if (nc.criterion == "sw") criterion = Criterion::kSocialWelfare;
  else if (nc.criterion == "sf") criterion = Criterion::kSocialFairness;
  else throw InputError("--criterion must be sw or sf");
  Direction dir;
  if (nc.direction == "max") dir = Direction::kMax;
  else if (nc.direction == "min") dir = Direction::kMin;
  else throw InputError("--direction must be max or min");
  EquilibriumResult res = find_equilibrium(game, kind, criterion, dir);
  if (cfg.format == "json") {
    ordered_json doc;
    doc["values"] = res.values;
    if (kind == EquilibriumKind::kNash) doc["profile"] = res.profile;
    doc["joint"] = res.joint;
    doc["epsilon"] = res.epsilon;
    text << write_json(doc);
  } else {
    text << "values: " << values_text(res.values) << '\n';
    if (kind == EquilibriumKind::kNash) {
      for (int p = 0; p < game.num_players(); ++p) text << "player " << p + 1 << ": " << strategy_line(p, res.profile[p]) << '\n';
    } else {
      for (std::size_t k = 0; k < game.num_profiles(); ++k) {
        if (res.joint[k] <= 0.0) continue;
        auto joint = game.decode(k);
        std::vector<std::string> names;
        for (int p = 0; p < game.num_players(); ++p) names.push_back(game.action_names(p)[joint[p]]);
        text << "(" << join(names, ",") << "): " << format_number(res.joint[k]) << '\n';
      }
    }
    text << "max deviation gain: " << format_number(res.epsilon) << '\n';
  }
  emit(cfg, text.str(), out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking and strategy synthesis for concurrent stochastic games"};
  app.require_subcommand(1);
  RunConfig cfg;
  NfgConfig nc;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "model (.csg) or explicit game (.json)")->required();
    sub->add_option("--const", cfg.constants, "constant binding name=value (repeatable)");
  };
  auto add_props = [&](CLI::App* sub) {
    sub->add_option("--props", cfg.props, "property file");
    sub->add_option("--prop", cfg.inline_props, "inline property (repeatable)");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--epsilon", cfg.epsilon, "value iteration stopping threshold");
    sub->add_option("--max-iters", cfg.max_iters, "value iteration limit");
    sub->add_option("--threads", cfg.threads, "worker threads");
  };
  auto add_format = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--output", cfg.output, "write output to a file");
  };

  auto* check = app.add_subcommand("check", "check properties and synthesize strategies");
  add_model(check);
  add_props(check);
  add_solver(check);
  add_format(check, {"text", "json", "csv"});
  check->add_option("--export-strategy", cfg.export_strategy, "write the synthesized strategy");
  check->add_flag("--timing", cfg.timing, "report wall-clock times");

  auto* sweep = app.add_subcommand("sweep", "check properties over a range of one constant");
  add_model(sweep);
  add_props(sweep);
  add_solver(sweep);
  sweep->add_option("--sweep", cfg.sweep, "name=lo:hi:step")->required();
  sweep->add_option("--output", cfg.output, "write the CSV to a file");

  auto* eval = app.add_subcommand("eval", "evaluate and certify a strategy file");
  add_model(eval);
  add_props(eval);
  add_solver(eval);
  add_format(eval, {"text", "json"});
  eval->add_option("--import-strategy", cfg.import_strategy, "strategy file")->required();
  eval->add_option("--runs", cfg.runs, "simulation runs");
  eval->add_option("--seed", cfg.seed, "simulation seed");
  eval->add_option("--certify-epsilon", cfg.certify_eps, "largest deviation gain accepted");

  auto* exp = app.add_subcommand("export", "write the explicit game as JSON");
  add_model(exp);
  exp->add_option("--output", cfg.output, "output file");

  auto* nfg = app.add_subcommand("nfg", "solve a normal form game table");
  nfg->add_option("--game", nc.game, "game table")->required();
  nfg->add_option("--kind", nc.kind, "ne or ce");
  nfg->add_option("--criterion", nc.criterion, "sw or sf");
  nfg->add_option("--direction", nc.direction, "max or min");
  nfg->add_flag("--matrix", nc.matrix, "solve as a zero-sum matrix game for player 1");
  add_format(nfg, {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kInputError);
  }

  try {
    if (*check) return cmd_check(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*eval) return cmd_eval(cfg, out);
    if (*exp) return cmd_export(cfg, out);
    if (*nfg) return cmd_nfg(cfg, nc, out);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kSolverError);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kInputError);
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kSolverError);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kSolverError);
  }
  return static_cast<int>(ExitCode::kInputError);
}

}  // namespace csg
