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

#include "csgcheck/mdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "csgcheck/error.hpp"
#include "csgcheck/linear_solve.hpp"

namespace csg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDenseLimit = 4000;

bool is_target(const Mdp& m, const ObjectiveSpec& spec, int x) { return !m.transient[x] && spec.right[m.base[x]]; }

bool is_dead(const Mdp& m, const ObjectiveSpec& spec, int x) {
  return !m.transient[x] && !spec.left[m.base[x]] && !spec.right[m.base[x]];
}

bool any_in(const MdpAction& a, const std::vector<char>& set) {
  for (const auto& s : a.successors) {
    if (s.prob > 0.0 && set[s.state]) return true;
  }
  return false;
}

bool all_in(const MdpAction& a, const std::vector<char>& set) {
  for (const auto& s : a.successors) {
    if (s.prob > 0.0 && !set[s.state]) return false;
  }
  return true;
}

std::vector<char> positive(const Mdp& m, const ObjectiveSpec& spec, bool forall) {
  const int n = m.size();
  std::vector<char> in(n, 0);
  for (int x = 0; x < n; ++x) in[x] = is_target(m, spec, x);
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      if (in[x] || is_dead(m, spec, x)) continue;
      bool ok = forall;
      for (const auto& a : m.actions[x]) {
        bool hit = any_in(a, in);
        if (forall && !hit) { ok = false; break; }
        if (!forall && hit) { ok = true; break; }
      }
      if (ok) in[x] = changed = true;
    }
  }
  return in;
}

std::vector<char> almost_sure(const Mdp& m, const ObjectiveSpec& spec, bool forall) {
  const int n = m.size();
  std::vector<char> y(n);
  for (int x = 0; x < n; ++x) y[x] = !is_dead(m, spec, x);
  while (true) {
    std::vector<char> x_set(n, 0);
    for (int x = 0; x < n; ++x) x_set[x] = is_target(m, spec, x);
    for (bool changed = true; changed;) {
      changed = false;
      for (int x = 0; x < n; ++x) {
        if (x_set[x] || !y[x]) continue;
        bool ok = forall;
        for (const auto& a : m.actions[x]) {
          bool good = all_in(a, y) && any_in(a, x_set);
          if (forall && !good) { ok = false; break; }
          if (!forall && good) { ok = true; break; }
        }
        if (ok) x_set[x] = changed = true;
      }
    }
    if (x_set == y) return y;
    y = std::move(x_set);
  }
}

double q_value(const MdpAction& a, const std::vector<double>& v, bool with_reward) {
  double total = with_reward ? a.reward : 0.0;
  for (const auto& s : a.successors) {
    if (s.prob == 0.0) continue;
    if (std::isinf(v[s.state])) return v[s.state];
    total += s.prob * v[s.state];
  }
  return total;
}

bool better(double a, double b, Direction d) { return d == Direction::kMax ? a > b : a < b; }

}  // namespace

int Mdp::add_node(int state, bool is_transient) {
  base.push_back(state);
  transient.push_back(is_transient);
  actions.emplace_back();
  return size() - 1;
}

Mdp mdp_from_game(const Csg& game, const ObjectiveSpec& spec) {
  Mdp m;
  for (int s = 0; s < game.num_states(); ++s) {
    m.add_node(s);
    for (int k = 0; k < game.num_choices(s); ++k) {
      m.actions[s].push_back({game.choices[s][k].successors, step_reward(spec, game, s, k)});
    }
  }
  return m;
}

std::vector<char> exists_positive(const Mdp& m, const ObjectiveSpec& spec) { return positive(m, spec, false); }
std::vector<char> forall_positive(const Mdp& m, const ObjectiveSpec& spec) { return positive(m, spec, true); }
std::vector<char> exists_almost_sure(const Mdp& m, const ObjectiveSpec& spec) { return almost_sure(m, spec, false); }
std::vector<char> forall_almost_sure(const Mdp& m, const ObjectiveSpec& spec) { return almost_sure(m, spec, true); }

MdpSolution solve_mdp(const Mdp& m, const ObjectiveSpec& spec, Direction dir, double tolerance, long max_iters) {
  if (spec.finite_horizon()) throw std::logic_error("solve_mdp needs an unbounded objective");
  const int n = m.size();
  const bool reward = spec.is_reward();
  MdpSolution sol;
  sol.values.assign(n, 0.0);
  sol.policy.assign(n, 0);
  std::vector<char> fixed(n, 0);
  std::vector<char> qualitative;
  for (int x = 0; x < n; ++x) {
    if (is_target(m, spec, x)) {
      sol.values[x] = reward ? 0.0 : 1.0;
      fixed[x] = 1;
    } else if (is_dead(m, spec, x)) {
      fixed[x] = 1;
    }
  }
  if (!reward) {
    qualitative = dir == Direction::kMax ? exists_positive(m, spec) : forall_positive(m, spec);
    for (int x = 0; x < n; ++x) {
      if (!qualitative[x]) fixed[x] = 1;
    }
  } else {
    qualitative = dir == Direction::kMin ? exists_almost_sure(m, spec) : forall_almost_sure(m, spec);
    for (int x = 0; x < n; ++x) {
      if (!qualitative[x]) {
        sol.values[x] = kInf;
        fixed[x] = 1;
      }
    }
  }

  std::vector<double> next = sol.values;
  while (true) {
    double residual = 0.0;
    for (int x = 0; x < n; ++x) {
      if (fixed[x]) continue;
      double best = dir == Direction::kMax ? -kInf : kInf;
      for (const auto& a : m.actions[x]) {
        double q = q_value(a, sol.values, reward);
        if (better(q, best, dir)) best = q;
      }
      next[x] = best;
      if (std::isfinite(best) && std::isfinite(sol.values[x])) {
        residual = std::max(residual, std::abs(best - sol.values[x]));
      } else if (best != sol.values[x]) {
        residual = kInf;
      }
    }
    sol.values.swap(next);
    ++sol.iterations;
    sol.residual = residual;
    if (residual < tolerance) break;
    if (sol.iterations >= max_iters) {
      throw NonConvergenceError("MDP value iteration did not converge", residual, sol.iterations);
    }
  }

  // Policy: optimal actions, and for reach-seeking objectives an optimal
  // action that makes progress towards the target.
  std::vector<std::vector<int>> optimal(n);
  for (int x = 0; x < n; ++x) {
    if (fixed[x]) continue;
    double v = sol.values[x];
    double slack = std::max(1e-9, 10 * tolerance) * std::max(1.0, std::abs(v));
    for (int a = 0; a < static_cast<int>(m.actions[x].size()); ++a) {
      double q = q_value(m.actions[x][a], sol.values, reward);
      if (q == v || std::abs(q - v) <= slack) optimal[x].push_back(a);
    }
    if (optimal[x].empty()) optimal[x].push_back(0);
    sol.policy[x] = optimal[x].front();
  }
  bool seeking = reward ? dir == Direction::kMin : dir == Direction::kMax;
  if (seeking) {
    std::vector<char> done(n, 0);
    for (int x = 0; x < n; ++x) done[x] = is_target(m, spec, x);
    for (bool changed = true; changed;) {
      changed = false;
      for (int x = 0; x < n; ++x) {
        if (done[x] || fixed[x]) continue;
        for (int a : optimal[x]) {
          if (any_in(m.actions[x][a], done)) {
            sol.policy[x] = a;
            done[x] = changed = true;
            break;
          }
        }
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    if (!fixed[x] || is_target(m, spec, x)) continue;
    // Outside the qualitative set keep away from it where possible.
    for (int a = 0; a < static_cast<int>(m.actions[x].size()); ++a) {
      if (!any_in(m.actions[x][a], qualitative)) {
        sol.policy[x] = a;
        break;
      }
    }
  }
  return sol;
}

std::vector<std::vector<double>> solve_mdp_bounded(const Mdp& m, const ObjectiveSpec& spec, const Csg& game,
                                                   Direction dir, int steps) {
  if (!spec.finite_horizon()) throw std::logic_error("solve_mdp_bounded needs a finite-horizon objective");
  const int n = m.size();
  const bool reward = spec.type == ObjectiveType::kCumulative;
  std::vector<std::vector<double>> table(steps + 1, std::vector<double>(n, 0.0));
  auto opt = [&](int x, const std::vector<double>& v) {
    double best = dir == Direction::kMax ? -kInf : kInf;
    for (const auto& a : m.actions[x]) {
      double q = q_value(a, v, reward);
      if (better(q, best, dir)) best = q;
    }
    return best;
  };
  auto into_transient = [&](int x) {
    return !m.actions[x].empty() && !m.actions[x][0].successors.empty() &&
           m.transient[m.actions[x][0].successors[0].state];
  };
  for (int j = 0; j <= steps; ++j) {
    auto& v = table[j];
    for (int x = 0; x < n; ++x) {
      if (m.transient[x]) v[x] = j == 0 ? 0.0 : opt(x, table[j - 1]);
    }
    for (int x = 0; x < n; ++x) {
      if (m.transient[x]) continue;
      double fixed_value = 0.0;
      if (spec.type == ObjectiveType::kBoundedUntil && decided_at(spec, m.base[x], &fixed_value)) {
        v[x] = fixed_value;
      } else if (j == 0) {
        v[x] = terminal_value(spec, game, m.base[x]);
      } else if (into_transient(x)) {
        v[x] = opt(x, v);
      } else {
        v[x] = opt(x, table[j - 1]);
      }
    }
  }
  return table;
}

std::vector<double> solve_chain(const Mdp& chain, const ObjectiveSpec& spec) {
  if (spec.finite_horizon()) throw std::logic_error("solve_chain needs an unbounded objective");
  const int n = chain.size();
  for (int x = 0; x < n; ++x) {
    if (chain.actions[x].size() != 1) throw std::logic_error("solve_chain needs exactly one action per node");
  }
  const bool reward = spec.is_reward();
  std::vector<double> values(n, 0.0);
  std::vector<char> unknown(n, 0);
  if (!reward) {
    auto pos = exists_positive(chain, spec);
    for (int x = 0; x < n; ++x) {
      if (is_target(chain, spec, x)) {
        values[x] = 1.0;
      } else if (pos[x]) {
        unknown[x] = 1;
      }
    }
  } else {
    auto sure = forall_almost_sure(chain, spec);
    for (int x = 0; x < n; ++x) {
      if (!sure[x]) {
        values[x] = kInf;
      } else if (!is_target(chain, spec, x)) {
        unknown[x] = 1;
      }
    }
  }
  std::vector<int> index(n, -1);
  std::vector<int> order;
  for (int x = 0; x < n; ++x) {
    if (unknown[x]) {
      index[x] = static_cast<int>(order.size());
      order.push_back(x);
    }
  }
  const int k = static_cast<int>(order.size());
  if (k == 0) return values;
  if (k > kDenseLimit) {
    // Too large for a dense solve: Gauss-Seidel to round-off.
    for (long it = 0;; ++it) {
      double change = 0.0;
      for (int x : order) {
        const MdpAction& act = chain.actions[x][0];
        double v = q_value(act, values, reward);
        change = std::max(change, std::abs(v - values[x]));
        values[x] = v;
      }
      if (change < 1e-14) break;
      if (it > 10000000) throw NonConvergenceError("chain solve did not converge", change, it);
    }
    return values;
  }
  std::vector<std::vector<double>> a(k, std::vector<double>(k, 0.0));
  std::vector<double> b(k, 0.0);
  for (int i = 0; i < k; ++i) {
    const MdpAction& act = chain.actions[order[i]][0];
    a[i][i] = 1.0;
    b[i] = reward ? act.reward : 0.0;
    for (const auto& s : act.successors) {
      if (index[s.state] >= 0) {
        a[i][index[s.state]] -= s.prob;
      } else {
        b[i] += s.prob * values[s.state];
      }
    }
  }
  auto x = solve_dense(std::move(a), std::move(b));
  for (int i = 0; i < k; ++i) values[order[i]] = x[i];
  return values;
}

}  // namespace csg
