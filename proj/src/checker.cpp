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

#include "csgcheck/checker.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "csgcheck/error.hpp"
#include "csgcheck/matrix_game.hpp"
#include "csgcheck/mdp.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs f(0..n-1) on up to `threads` workers over contiguous chunks.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 1 || n < 64) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t * chunk; i < std::min(n, (t + 1) * chunk); ++i) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool hits(const Choice& c, const std::vector<char>& set) {
  for (const auto& s : c.successors) {
    if (s.prob > 0.0 && set[s.state]) return true;
  }
  return false;
}

bool inside(const Choice& c, const std::vector<char>& set) {
  for (const auto& s : c.successors) {
    if (s.prob > 0.0 && !set[s.state]) return false;
  }
  return true;
}

struct Shape {
  int rows = 1;
  int cols = 1;
};

Shape shape(const Csg& g, int s) {
  Shape sh;
  sh.rows = static_cast<int>(g.available[s][0].size());
  sh.cols = g.num_choices(s) / sh.rows;
  return sh;
}

// Choice index for reacher action a and opponent action b.
int choice_of(const Shape& sh, bool reacher_row, int a, int b) {
  return reacher_row ? a * sh.cols + b : b * sh.cols + a;
}

std::vector<char> positive_set(const Csg& g, const std::vector<char>& left, const std::vector<char>& target,
                               bool reacher_row) {
  const int ns = g.num_states();
  std::vector<char> in = target;
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < ns; ++s) {
      if (in[s] || !left[s]) continue;
      Shape sh = shape(g, s);
      const int na = reacher_row ? sh.rows : sh.cols;
      const int nb = reacher_row ? sh.cols : sh.rows;
      bool ok = true;
      for (int b = 0; b < nb && ok; ++b) {
        bool any = false;
        for (int a = 0; a < na && !any; ++a) any = hits(g.choices[s][choice_of(sh, reacher_row, a, b)], in);
        ok = any;
      }
      if (ok) in[s] = changed = true;
    }
  }
  return in;
}

std::vector<int> safe_actions(const Csg& g, int s, const std::vector<char>& y, bool reacher_row) {
  Shape sh = shape(g, s);
  const int na = reacher_row ? sh.rows : sh.cols;
  const int nb = reacher_row ? sh.cols : sh.rows;
  std::vector<int> safe;
  for (int a = 0; a < na; ++a) {
    bool ok = true;
    for (int b = 0; b < nb && ok; ++b) ok = inside(g.choices[s][choice_of(sh, reacher_row, a, b)], y);
    if (ok) safe.push_back(a);
  }
  return safe;
}

std::vector<char> almost_sure(const Csg& g, const std::vector<char>& left, const std::vector<char>& target,
                              bool reacher_row) {
  const int ns = g.num_states();
  std::vector<char> y(ns);
  for (int s = 0; s < ns; ++s) y[s] = left[s] || target[s];
  while (true) {
    std::vector<char> x = target;
    for (bool changed = true; changed;) {
      changed = false;
      for (int s = 0; s < ns; ++s) {
        if (x[s] || !y[s]) continue;
        auto safe = safe_actions(g, s, y, reacher_row);
        if (safe.empty()) continue;
        Shape sh = shape(g, s);
        const int nb = reacher_row ? sh.cols : sh.rows;
        bool ok = true;
        for (int b = 0; b < nb && ok; ++b) {
          bool any = false;
          for (int a : safe) {
            if (hits(g.choices[s][choice_of(sh, reacher_row, a, b)], x)) {
              any = true;
              break;
            }
          }
          ok = any;
        }
        if (ok) x[s] = changed = true;
      }
    }
    if (x == y) return y;
    y = std::move(x);
  }
}

MixedStrategy pure(std::size_t size, std::size_t index) {
  MixedStrategy d(size, 0.0);
  d[index] = 1.0;
  return d;
}

std::vector<std::vector<std::string>> coalition_names(const CoalitionGame& cg) {
  std::vector<std::vector<std::string>> out;
  for (const auto& name : cg.game.player_names) out.push_back(split(name, ','));
  return out;
}

// Entry playing choices[s][k] with certainty.
StrategyEntry point_entry(const Csg& g, int s, int memory, int k, bool joint) {
  StrategyEntry e{s, memory, {}, {}};
  if (joint) {
    e.joint = pure(g.num_choices(s), k);
    return e;
  }
  for (int c = 0; c < g.num_players(); ++c) {
    const auto& avail = g.available[s][c];
    auto pos = std::lower_bound(avail.begin(), avail.end(), g.choices[s][k].joint[c]) - avail.begin();
    e.local.push_back(pure(avail.size(), pos));
  }
  return e;
}

double expectation(const Choice& c, const std::vector<double>& v) {
  double total = 0.0;
  for (const auto& s : c.successors) {
    if (s.prob == 0.0) continue;
    if (std::isinf(v[s.state])) return v[s.state];
    total += s.prob * v[s.state];
  }
  return total;
}

std::string where(const Csg& g, int s) { return " in state " + g.state_names[s]; }

// Values within kThresholdTolerance of the bound count as equal to it.
constexpr double kThresholdTolerance = 1e-9;

bool compare(double v, Comparison cmp, double x) {
  const double slack = kThresholdTolerance * std::max(1.0, std::abs(x));
  const bool equal = std::abs(v - x) <= slack || v == x;
  switch (cmp) {
    case Comparison::kLess: return v < x && !equal;
    case Comparison::kLessEqual: return v <= x || equal;
    case Comparison::kGreater: return v > x && !equal;
    case Comparison::kGreaterEqual: return v >= x || equal;
  }
  return false;
}

bool has_special(const Expr& e) {
  if (e.kind == ExprKind::kLabel || e.kind == ExprKind::kGame) return true;
  for (const auto& a : e.args) {
    if (a && has_special(*a)) return true;
  }
  return false;
}

}  // namespace

std::vector<char> prob0_max(const Csg& game, const std::vector<char>& left, const std::vector<char>& target) {
  auto pos = positive_set(game, left, target, true);
  for (auto& x : pos) x = !x;
  return pos;
}

std::vector<char> almost_sure_set(const Csg& game, const std::vector<char>& left, const std::vector<char>& target,
                                  bool reacher_is_row) {
  return almost_sure(game, left, target, reacher_is_row);
}

GameValues solve_zero_sum(const CoalitionGame& cgame, const ObjectiveSpec& spec, Direction dir,
                          const CheckOptions& opts) {
  const Csg& g = cgame.game;
  if (g.num_players() > 2) throw std::logic_error("zero-sum solve needs at most two coalitions");
  const int ns = g.num_states();
  const bool two = g.num_players() == 2;

  auto solve_local = [&](int s, const std::vector<double>& v, bool strategies) {
    Shape sh = shape(g, s);
    Matrix z(sh.rows, std::vector<double>(sh.cols));
    for (int r = 0; r < sh.rows; ++r) {
      for (int c = 0; c < sh.cols; ++c) {
        int k = r * sh.cols + c;
        double x = step_reward(spec, g, s, k) + expectation(g.choices[s][k], v);
        z[r][c] = dir == Direction::kMax ? x : -x;
      }
    }
    GameSolution sol = solve_matrix_game(z, strategies && two);
    if (dir == Direction::kMin) sol.value = -sol.value;
    return sol;
  };
  auto entry_of = [&](int s, int memory, const GameSolution& sol) {
    StrategyEntry e{s, memory, {sol.row}, {}};
    if (two) e.local.push_back(sol.col);
    return e;
  };

  GameValues out;
  SynthesizedStrategy st;
  st.coalitions = coalition_names(cgame);

  if (spec.finite_horizon()) {
    const int h = spec.horizon();
    std::vector<std::vector<double>> v(h + 1, std::vector<double>(ns));
    std::vector<char> fixed(ns, 0);
    for (int s = 0; s < ns; ++s) {
      double x = 0.0;
      if (spec.type == ObjectiveType::kBoundedUntil && decided_at(spec, s, &x)) fixed[s] = 1;
      v[0][s] = fixed[s] ? x : terminal_value(spec, g, s);
    }
    std::vector<StrategyEntry> entries(static_cast<std::size_t>(h + 1) * ns);
    for (int r = 1; r <= h; ++r) {
      parallel_for(ns, opts.threads, [&](int s) {
        if (fixed[s]) {
          v[r][s] = v[0][s];
          if (opts.synthesize) entries[r * ns + s] = point_entry(g, s, r, 0, false);
          return;
        }
        GameSolution sol = solve_local(s, v[r - 1], opts.synthesize);
        v[r][s] = sol.value;
        if (opts.synthesize) entries[r * ns + s] = entry_of(s, r, sol);
      });
    }
    out.values = {v[h]};
    out.iterations = h;
    if (opts.synthesize) {
      for (int s = 0; s < ns; ++s) entries[s] = point_entry(g, s, 0, 0, false);
      st.memory_kind = MemoryKind::kSteps;
      st.memory_size = h + 1;
      st.initial_memory = h;
      st.entries = std::move(entries);
      st.prune(g);
      out.strategy = std::move(st);
    }
    return out;
  }

  const bool reward = spec.is_reward();
  std::vector<double> v(ns, 0.0);
  std::vector<char> fixed(ns, 0);
  std::vector<char> qualitative;
  // The side that wants the target: coalition 0 when maximizing a
  // probability or minimizing a reward.
  const bool reacher_row = reward ? dir == Direction::kMin : dir == Direction::kMax;
  for (int s = 0; s < ns; ++s) {
    if (spec.right[s]) {
      v[s] = reward ? 0.0 : 1.0;
      fixed[s] = 1;
    } else if (!spec.left[s]) {
      fixed[s] = 1;
    }
  }
  if (!reward) {
    qualitative = positive_set(g, spec.left, spec.right, reacher_row);
    for (int s = 0; s < ns; ++s) {
      if (!qualitative[s]) fixed[s] = 1;
    }
  } else {
    for (int s = 0; s < ns; ++s) {
      for (std::size_t k = 0; k < g.choices[s].size(); ++k) {
        if (step_reward(spec, g, s, static_cast<int>(k)) < 0) {
          throw InputError("reachability rewards must be nonnegative" + where(g, s));
        }
      }
    }
    qualitative = almost_sure(g, spec.left, spec.right, reacher_row);
    for (int s = 0; s < ns; ++s) {
      if (!qualitative[s]) {
        v[s] = kInf;
        fixed[s] = 1;
      }
    }
  }

  std::vector<double> next = v;
  while (true) {
    parallel_for(ns, opts.threads, [&](int s) {
      if (!fixed[s]) next[s] = solve_local(s, v, false).value;
    });
    double residual = 0.0;
    for (int s = 0; s < ns; ++s) {
      if (fixed[s]) continue;
      if (std::isfinite(next[s]) && std::isfinite(v[s])) {
        residual = std::max(residual, std::abs(next[s] - v[s]));
      } else if (next[s] != v[s]) {
        residual = kInf;
      }
    }
    v.swap(next);
    ++out.iterations;
    out.residual = residual;
    if (opts.on_sweep) opts.on_sweep(v);
    if (residual < opts.epsilon) break;
    if (out.iterations >= opts.max_iters) {
      throw NonConvergenceError("value iteration did not converge within " + std::to_string(opts.max_iters) +
                                    " iterations (residual " + format_number(residual) + ")",
                                residual, out.iterations);
    }
  }
  out.values = {v};
  if (!opts.synthesize) return out;

  std::vector<StrategyEntry> entries(ns);
  parallel_for(ns, opts.threads, [&](int s) {
    if (!fixed[s]) {
      entries[s] = entry_of(s, 0, solve_local(s, v, true));
      return;
    }
    entries[s] = point_entry(g, s, 0, 0, false);
    if (reward || qualitative[s] || !spec.left[s]) return;
    // The opponent keeps the reacher away from the positive set.
    Shape sh = shape(g, s);
    const int na = reacher_row ? sh.rows : sh.cols;
    const int nb = reacher_row ? sh.cols : sh.rows;
    for (int b = 0; b < nb; ++b) {
      bool avoid = true;
      for (int a = 0; a < na && avoid; ++a) avoid = !hits(g.choices[s][choice_of(sh, reacher_row, a, b)], qualitative);
      if (!avoid) continue;
      const int side = reacher_row ? 1 : 0;
      if (side < g.num_players()) entries[s].local[side] = pure(entries[s].local[side].size(), b);
      break;
    }
  });
  if (!reward) {
    // Where the reacher wins almost surely, it mixes uniformly over the
    // actions that keep it inside that set.
    auto sure = almost_sure(g, spec.left, spec.right, reacher_row);
    const int side = reacher_row ? 0 : 1;
    for (int s = 0; s < ns; ++s) {
      if (!sure[s] || spec.right[s] || side >= g.num_players()) continue;
      auto safe = safe_actions(g, s, sure, reacher_row);
      MixedStrategy d(entries[s].local[side].size(), 0.0);
      for (int a : safe) d[a] = 1.0 / safe.size();
      entries[s].local[side] = d;
    }
  }
  st.entries = std::move(entries);
  st.prune(g);
  out.strategy = std::move(st);
  return out;
}

namespace {

EquilibriumResult equilibrium_at(const NormalFormGame& nfg, EquilibriumKind kind, Criterion criterion,
                                 Direction dir, const Csg& g, int s, const std::string& stage) {
  for (std::size_t k = 0; k < nfg.num_profiles(); ++k) {
    for (int i = 0; i < nfg.num_players(); ++i) {
      if (!std::isfinite(nfg.utility(k, i))) {
        throw SolverError("infinite expected value in the local game" + where(g, s) + stage +
                          " (an objective cannot be met with probability 1)");
      }
    }
  }
  try {
    return find_equilibrium(nfg, kind, criterion, dir);
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + where(g, s) + stage);
  }
}

StrategyEntry witness_entry(const EquilibriumResult& res, int s, int memory, bool joint) {
  StrategyEntry e{s, memory, {}, {}};
  if (joint) {
    e.joint = res.joint;
  } else {
    e.local = res.profile;
  }
  return e;
}

GameValues finite_equilibria(const CoalitionGame& cgame, const std::vector<ObjectiveSpec>& specs,
                             EquilibriumKind kind, Criterion criterion, Direction dir, const CheckOptions& opts) {
  const Csg& g = cgame.game;
  const int ns = g.num_states();
  const int m = g.num_players();
  const int k = static_cast<int>(specs.size());
  const bool joint = kind == EquilibriumKind::kCorrelated;
  int horizon = 0;
  for (const auto& sp : specs) horizon = std::max(horizon, sp.horizon());

  // Value of objective i at state s with r global steps left, if fixed.
  auto fixed_value = [&](int i, int s, int r, double* x) {
    *x = 0.0;
    if (i >= k) return true;
    const int ri = specs[i].horizon() - horizon + r;
    if (ri < 0) return true;
    if (specs[i].type == ObjectiveType::kBoundedUntil && decided_at(specs[i], s, x)) return true;
    if (ri == 0) {
      *x = terminal_value(specs[i], g, s);
      return true;
    }
    return false;
  };

  std::vector<std::vector<std::vector<double>>> val(horizon + 1,
                                                    std::vector<std::vector<double>>(ns, std::vector<double>(m)));
  for (int s = 0; s < ns; ++s) {
    for (int i = 0; i < m; ++i) fixed_value(i, s, 0, &val[0][s][i]);
  }
  std::vector<StrategyEntry> entries(static_cast<std::size_t>(horizon + 1) * ns);
  for (int r = 1; r <= horizon; ++r) {
    parallel_for(ns, opts.threads, [&](int s) {
      std::vector<char> is_fixed(m);
      std::vector<double> fixed(m);
      bool all = true;
      for (int i = 0; i < m; ++i) {
        is_fixed[i] = fixed_value(i, s, r, &fixed[i]);
        all = all && is_fixed[i];
      }
      if (all) {
        val[r][s] = fixed;
        if (opts.synthesize) entries[r * ns + s] = point_entry(g, s, r, 0, joint);
        return;
      }
      std::vector<std::vector<double>> immediate(m, std::vector<double>(g.num_choices(s), 0.0));
      for (int i = 0; i < k; ++i) {
        if (is_fixed[i]) continue;
        for (int c = 0; c < g.num_choices(s); ++c) immediate[i][c] = step_reward(specs[i], g, s, c);
      }
      NormalFormGame nfg = local_nfg(g, s, val[r - 1], &immediate);
      for (std::size_t a = 0; a < nfg.num_profiles(); ++a) {
        for (int i = 0; i < m; ++i) {
          if (is_fixed[i]) nfg.set_utility(a, i, fixed[i]);
        }
      }
      auto res = equilibrium_at(nfg, kind, criterion, dir, g, s, " (" + std::to_string(r) + " steps left)");
      for (int i = 0; i < m; ++i) val[r][s][i] = is_fixed[i] ? fixed[i] : res.values[i];
      if (opts.synthesize) entries[r * ns + s] = witness_entry(res, s, r, joint);
    });
  }

  GameValues out;
  out.values.assign(m, std::vector<double>(ns));
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < ns; ++s) out.values[i][s] = val[horizon][s][i];
  }
  out.iterations = horizon;
  if (opts.synthesize) {
    SynthesizedStrategy st;
    st.joint = joint;
    st.coalitions = coalition_names(cgame);
    st.memory_kind = MemoryKind::kSteps;
    st.memory_size = horizon + 1;
    st.initial_memory = horizon;
    for (int s = 0; s < ns; ++s) entries[s] = point_entry(g, s, 0, 0, joint);
    st.entries = std::move(entries);
    st.prune(g);
    out.strategy = std::move(st);
  }
  return out;
}

GameValues infinite_equilibria(const CoalitionGame& cgame, const std::vector<ObjectiveSpec>& specs,
                               EquilibriumKind kind, Criterion criterion, Direction dir, const CheckOptions& opts) {
  const Csg& g = cgame.game;
  const int ns = g.num_states();
  const bool joint = kind == EquilibriumKind::kCorrelated;
  if (g.num_players() != 2 || specs.size() != 2) {
    throw InputError("unbounded equilibrium objectives need exactly two coalitions covering all players");
  }
  std::vector<MdpSolution> coop(2);
  std::vector<std::vector<char>> decided(2, std::vector<char>(ns, 0));
  std::vector<std::vector<double>> term(2, std::vector<double>(ns, 0.0));
  for (int i = 0; i < 2; ++i) {
    Mdp mdp = mdp_from_game(g, specs[i]);
    coop[i] = solve_mdp(mdp, specs[i], dir, opts.epsilon, opts.max_iters);
    std::vector<char> reachable;
    if (!specs[i].is_reward()) reachable = exists_positive(mdp, specs[i]);
    for (int s = 0; s < ns; ++s) {
      double x = 0.0;
      if (decided_at(specs[i], s, &x)) {
        decided[i][s] = 1;
        term[i][s] = x;
      } else if (!specs[i].is_reward() && !reachable[s]) {
        decided[i][s] = 1;
      }
    }
  }
  // Value of coalition i at state t when its objective may already be
  // decided there, or the other's is and play turns cooperative.
  auto outside = [&](int t, int i, const std::vector<std::vector<double>>& v) {
    if (decided[i][t]) return term[i][t];
    if (decided[1 - i][t]) return coop[i].values[t];
    return v[t][i];
  };

  std::vector<int> open;
  for (int s = 0; s < ns; ++s) {
    if (!decided[0][s] && !decided[1][s]) open.push_back(s);
  }
  const int no = static_cast<int>(open.size());
  std::vector<std::vector<double>> v(ns, std::vector<double>(2, 0.0));
  std::vector<std::vector<double>> cont(ns, std::vector<double>(2, 0.0));
  std::vector<std::vector<double>> next = v;
  std::vector<EquilibriumResult> witness(opts.synthesize ? ns : 0);

  auto sweep = [&](bool keep) {
    for (int t = 0; t < ns; ++t) {
      for (int i = 0; i < 2; ++i) cont[t][i] = outside(t, i, v);
    }
    parallel_for(no, opts.threads, [&](int idx) {
      const int s = open[idx];
      std::vector<std::vector<double>> immediate(2, std::vector<double>(g.num_choices(s), 0.0));
      for (int i = 0; i < 2; ++i) {
        for (int c = 0; c < g.num_choices(s); ++c) immediate[i][c] = step_reward(specs[i], g, s, c);
      }
      auto res = equilibrium_at(local_nfg(g, s, cont, &immediate), kind, criterion, dir, g, s, "");
      next[s] = res.values;
      if (keep) witness[s] = std::move(res);
    });
  };

  GameValues out;
  while (no > 0) {
    sweep(false);
    double residual = 0.0;
    for (int s : open) {
      for (int i = 0; i < 2; ++i) residual = std::max(residual, std::abs(next[s][i] - v[s][i]));
    }
    for (int s : open) v[s] = next[s];
    ++out.iterations;
    out.residual = residual;
    if (residual < opts.epsilon) break;
    if (out.iterations >= opts.max_iters) {
      throw NonConvergenceError("equilibrium value iteration did not converge within " +
                                    std::to_string(opts.max_iters) + " iterations (residual " +
                                    format_number(residual) + ")",
                                residual, out.iterations);
    }
  }
  out.values.assign(2, std::vector<double>(ns));
  for (int s = 0; s < ns; ++s) {
    for (int i = 0; i < 2; ++i) out.values[i][s] = outside(s, i, v);
  }
  if (!opts.synthesize) return out;

  if (no > 0) sweep(true);
  SynthesizedStrategy st;
  st.joint = joint;
  st.coalitions = coalition_names(cgame);
  st.memory_kind = MemoryKind::kFlags;
  st.memory_size = 4;
  st.decided = decided;
  auto flags = [&](int s) { return (decided[0][s] ? 1 : 0) | (decided[1][s] ? 2 : 0); };
  st.initial_memory = flags(g.initial);
  for (int s = 0; s < ns; ++s) {
    for (int mem = 0; mem < 4; ++mem) {
      if ((mem & flags(s)) != flags(s)) continue;
      if (mem == 0) {
        st.entries.push_back(witness_entry(witness[s], s, 0, joint));
      } else if (mem == 3) {
        st.entries.push_back(point_entry(g, s, mem, 0, joint));
      } else {
        const int open_side = mem == 1 ? 1 : 0;
        st.entries.push_back(point_entry(g, s, mem, coop[open_side].policy[s], joint));
      }
    }
  }
  st.prune(g);
  out.strategy = std::move(st);
  return out;
}

}  // namespace

GameValues solve_equilibria(const CoalitionGame& cgame, const std::vector<ObjectiveSpec>& specs,
                            EquilibriumKind kind, Criterion criterion, Direction direction,
                            const CheckOptions& options) {
  if (specs.empty() || static_cast<int>(specs.size()) > cgame.game.num_players()) {
    throw InputError("equilibrium query needs one objective per coalition");
  }
  bool finite = true;
  bool infinite = true;
  for (const auto& sp : specs) {
    finite = finite && sp.finite_horizon();
    infinite = infinite && !sp.finite_horizon();
  }
  if (finite) return finite_equilibria(cgame, specs, kind, criterion, direction, options);
  if (infinite) return infinite_equilibria(cgame, specs, kind, criterion, direction, options);
  throw InputError("equilibrium queries mixing bounded and unbounded objectives are not supported");
}

Checker::Checker(const Csg& game, CheckOptions options) : game_(game), options_(std::move(options)) {
  if (!(options_.epsilon > 0)) throw InputError("epsilon must be positive");
  if (options_.max_iters < 1) throw InputError("max-iters must be positive");
}

ObjectiveSpec Checker::objective_spec(const Objective& o) {
  std::vector<char> left, right;
  if (!o.is_reward) {
    if (o.path.op != PathOp::kNext) left = satisfying_states(*o.path.left);
    right = satisfying_states(*o.path.right);
  } else if (o.rew.op == RewardOp::kReach) {
    right = satisfying_states(*o.rew.target);
  }
  return make_objective_spec(o, game_, std::move(left), std::move(right));
}

GameValues Checker::game_values(const GameFormula& g) {
  Partition partition = resolve_coalitions(g, game_);
  std::vector<ObjectiveSpec> specs;
  for (const auto& o : g.objectives) specs.push_back(objective_spec(o));
  const Direction dir = g.numeric ? g.direction : g.effective_direction();
  CoalitionGame cg = build_coalition_game(game_, partition);
  if (!g.equilibrium) {
    if (partition.size() != 1 || specs.size() != 1) throw InputError("zero-sum operator needs one coalition");
    return solve_zero_sum(cg, specs[0], dir, options_);
  }
  if (specs.size() != partition.size()) throw InputError("equilibrium query needs one objective per coalition");
  return solve_equilibria(cg, specs, g.kind, g.criterion, dir, options_);
}

std::vector<char> Checker::satisfying_states(const Expr& e) {
  const int ns = game_.num_states();
  auto map2 = [&](const std::vector<char>& a, const std::vector<char>& b, auto f) {
    std::vector<char> out(ns);
    for (int s = 0; s < ns; ++s) out[s] = f(a[s] != 0, b[s] != 0);
    return out;
  };
  switch (e.kind) {
    case ExprKind::kLiteral:
      if (e.literal.type == Type::kBool) return std::vector<char>(ns, e.literal.as_bool());
      break;
    case ExprKind::kLabel: {
      int id = game_.find_label(e.name);
      if (id < 0) throw InputError("unknown label \"" + e.name + "\"");
      return game_.label_states(id);
    }
    case ExprKind::kGame: {
      const GameFormula& g = *e.game;
      if (g.numeric) throw InputError("numeric query '" + print_game(g) + "' cannot be used as a state formula");
      GameValues gv = game_values(g);
      const double x = evaluate_constant(g.threshold).as_double();
      std::vector<char> out(ns);
      const std::size_t rows = g.equilibrium ? g.objectives.size() : 1;
      for (int s = 0; s < ns; ++s) {
        double total = 0.0;
        for (std::size_t i = 0; i < rows; ++i) total += gv.values[i][s];
        out[s] = compare(total, g.comparison, x);
      }
      return out;
    }
    case ExprKind::kUnary:
      if (e.op == Op::kNot && has_special(e)) {
        auto a = satisfying_states(*e.args[0]);
        for (auto& x : a) x = !x;
        return a;
      }
      break;
    case ExprKind::kBinary:
      if (has_special(e)) {
        auto a = satisfying_states(*e.args[0]);
        auto b = satisfying_states(*e.args[1]);
        switch (e.op) {
          case Op::kAnd: return map2(a, b, [](bool x, bool y) { return x && y; });
          case Op::kOr: return map2(a, b, [](bool x, bool y) { return x || y; });
          case Op::kImplies: return map2(a, b, [](bool x, bool y) { return !x || y; });
          case Op::kIff: return map2(a, b, [](bool x, bool y) { return x == y; });
          case Op::kEq: return map2(a, b, [](bool x, bool y) { return x == y; });
          case Op::kNe: return map2(a, b, [](bool x, bool y) { return x != y; });
          default: break;
        }
      }
      break;
    case ExprKind::kIte:
      if (has_special(e)) {
        auto c = satisfying_states(*e.args[0]);
        auto a = satisfying_states(*e.args[1]);
        auto b = satisfying_states(*e.args[2]);
        std::vector<char> out(ns);
        for (int s = 0; s < ns; ++s) out[s] = c[s] ? a[s] : b[s];
        return out;
      }
      break;
    default:
      break;
  }
  if (has_special(e)) throw InputError("unsupported state formula '" + print_expr(e) + "'");
  if (e.type != Type::kBool) throw InputError("state formula '" + print_expr(e) + "' is not boolean");
  std::vector<char> out(ns);
  for (int s = 0; s < ns; ++s) {
    if (static_cast<int>(game_.valuations.size()) != ns) {
      throw InputError("formula '" + print_expr(e) + "' needs variable values, which this game lacks");
    }
    out[s] = evaluate(e, game_.valuations[s]).as_bool();
  }
  return out;
}

CheckResult Checker::check(const Property& property) {
  auto diags = typecheck(property, game_);
  if (!diags.empty()) throw InputError(join(diags, "; "));
  CheckResult result;
  result.query = print_property(property);
  const int init = game_.initial;
  if (const GameFormula* g = property.root_game()) {
    GameValues gv = game_values(*g);
    const std::size_t rows = g->equilibrium ? g->objectives.size() : 1;
    result.numeric = g->numeric;
    for (std::size_t i = 0; i < rows; ++i) {
      result.values.push_back(gv.values[i][init]);
      result.value += gv.values[i][init];
      result.state_values.push_back(gv.values[i]);
    }
    result.strategy = std::move(gv.strategy);
    result.iterations = gv.iterations;
    result.residual = gv.residual;
    if (!g->numeric) {
      const double x = evaluate_constant(g->threshold).as_double();
      result.satisfying.assign(game_.num_states(), 0);
      for (int s = 0; s < game_.num_states(); ++s) {
        double total = 0.0;
        for (std::size_t i = 0; i < rows; ++i) total += gv.values[i][s];
        result.satisfying[s] = compare(total, g->comparison, x);
      }
      result.satisfied = result.satisfying[init];
    }
    return result;
  }
  result.satisfying = satisfying_states(*property.formula);
  result.satisfied = result.satisfying[init];
  return result;
}

}  // namespace csg
