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

#include "csgcheck/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "csgcheck/error.hpp"
#include "csgcheck/linear_solve.hpp"
#include "csgcheck/lp.hpp"

namespace csg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTie = 1e-9;
constexpr double kDedupe = 1e-7;
constexpr double kAcceptGain = 1e-7;

// Expected utility of `player` for pure `action` while the others follow
// `profile`.
double action_payoff(const NormalFormGame& game, int player, int action,
                     const StrategyProfile& profile) {
  double total = 0.0;
  for (std::size_t k = 0; k < game.num_profiles(); ++k) {
    if (game.action_of(k, player) != action) continue;
    double w = 1.0;
    for (int j = 0; j < game.num_players() && w != 0.0; ++j) {
      if (j != player) w *= profile[j][game.action_of(k, j)];
    }
    if (w != 0.0) total += w * game.utility(k, player);
  }
  return total;
}

// All nonempty subsets of {0..n-1}, by size then lexicographically.
std::vector<std::vector<int>> ordered_supports(int n) {
  if (n > 20) throw InputError("too many actions for support enumeration");
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int a = 0; a < n; ++a) {
      if (mask & (1u << a)) s.push_back(a);
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

bool better(Criterion criterion, const std::vector<double>& a, const std::vector<double>& b) {
  if (criterion == Criterion::kSocialWelfare) return welfare(a) > welfare(b) + kTie;
  double sa = spread(a), sb = spread(b);
  if (sa < sb - kTie) return true;
  if (sa > sb + kTie) return false;
  return welfare(a) > welfare(b) + kTie;
}

double linf(const StrategyProfile& a, const StrategyProfile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) d = std::max(d, std::abs(a[i][k] - b[i][k]));
  }
  return d;
}

void normalize(MixedStrategy& s) {
  double total = 0.0;
  for (double& p : s) {
    p = std::max(0.0, p);
    total += p;
  }
  for (double& p : s) p /= total;
}

struct Collector {
  Criterion criterion;
  std::vector<StrategyProfile> found;
  std::vector<std::vector<double>> values;
  int best = -1;

  void offer(const NormalFormGame& game, StrategyProfile profile) {
    for (auto& s : profile) normalize(s);
    if (nash_gain(game, profile) > kAcceptGain) return;
    for (const auto& f : found) {
      if (linf(f, profile) <= kDedupe) return;
    }
    values.push_back(expected_utilities(game, profile));
    found.push_back(std::move(profile));
    int idx = static_cast<int>(found.size()) - 1;
    if (best < 0 || better(criterion, values[idx], values[best])) best = idx;
  }
};

// For fixed supports, the opponent polytope: distributions q over the
// opponent's support making every action of `own_support` a best reply of
// `player` with payoff v. Variables: q (opponent actions) then v.
LinearProgram support_polytope(const NormalFormGame& game, int player,
                               const std::vector<int>& own_support,
                               const std::vector<int>& other_support) {
  const int other = 1 - player;
  const int m = game.num_actions(other);
  LinearProgram lp(m + 1);
  lp.lower[m] = -kInf;
  for (int b = 0; b < m; ++b) lp.upper[b] = 0.0;
  for (int b : other_support) lp.upper[b] = kInf;
  std::vector<double> sum(m + 1, 1.0);
  sum[m] = 0.0;
  lp.add(std::move(sum), Relation::kEqual, 1.0);
  std::vector<char> in_support(game.num_actions(player), 0);
  for (int a : own_support) in_support[a] = 1;
  std::vector<int> joint(2);
  for (int a = 0; a < game.num_actions(player); ++a) {
    std::vector<double> row(m + 1);
    for (int b = 0; b < m; ++b) {
      joint[player] = a;
      joint[other] = b;
      row[b] = game.utility(game.index(joint), player);
    }
    row[m] = -1.0;
    lp.add(std::move(row), in_support[a] ? Relation::kEqual : Relation::kLessEqual, 0.0);
  }
  return lp;
}

struct PolytopeRange {
  bool feasible = false;
  double lo = 0.0, hi = 0.0;
  MixedStrategy at_lo, at_hi;
};

PolytopeRange value_range(LinearProgram lp, bool need_low) {
  PolytopeRange r;
  const int v = lp.num_variables() - 1;
  lp.objective[v] = 1.0;
  lp.sense = Sense::kMaximize;
  LpResult hi = lp_solve(lp);
  if (hi.status != LpStatus::kOptimal) return r;
  r.feasible = true;
  r.hi = hi.x[v];
  r.at_hi.assign(hi.x.begin(), hi.x.end() - 1);
  if (need_low) {
    lp.sense = Sense::kMinimize;
    LpResult lo = lp_solve(lp);
    if (lo.status != LpStatus::kOptimal) {
      r.feasible = false;
      return r;
    }
    r.lo = lo.x[v];
    r.at_lo.assign(lo.x.begin(), lo.x.end() - 1);
  }
  return r;
}

// A point of the polytope with value exactly `target` (inside [lo, hi]).
MixedStrategy point_with_value(LinearProgram lp, const PolytopeRange& r, double target) {
  if (target >= r.hi - kTie) return r.at_hi;
  if (target <= r.lo + kTie) return r.at_lo;
  const int v = lp.num_variables() - 1;
  lp.lower[v] = lp.upper[v] = target;
  LpResult res = lp_solve(lp);
  if (res.status != LpStatus::kOptimal) {
    return target - r.lo < r.hi - target ? r.at_lo : r.at_hi;
  }
  return MixedStrategy(res.x.begin(), res.x.end() - 1);
}

void enumerate_two_player(const NormalFormGame& game, Collector& out) {
  auto s1 = ordered_supports(game.num_actions(0));
  auto s2 = ordered_supports(game.num_actions(1));
  struct Pair {
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    for (std::size_t j = 0; j < s2.size(); ++j) pairs.push_back({i, j});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    return s1[a.i].size() + s2[a.j].size() < s1[b.i].size() + s2[b.j].size();
  });
  const bool fair = out.criterion == Criterion::kSocialFairness;
  for (const auto& [i, j] : pairs) {
    // y makes S1 indifferent for player 1; x makes S2 indifferent for player 2.
    LinearProgram ylp = support_polytope(game, 0, s1[i], s2[j]);
    PolytopeRange yr = value_range(ylp, fair);
    if (!yr.feasible) continue;
    LinearProgram xlp = support_polytope(game, 1, s2[j], s1[i]);
    PolytopeRange xr = value_range(xlp, fair);
    if (!xr.feasible) continue;
    if (!fair) {
      out.offer(game, {xr.at_hi, yr.at_hi});
      continue;
    }
    // Closest pair of values from [yr.lo, yr.hi] x [xr.lo, xr.hi], favoring
    // welfare on ties.
    double t1, t2;
    double lo = std::max(yr.lo, xr.lo), hi = std::min(yr.hi, xr.hi);
    if (lo <= hi) {
      t1 = t2 = hi;
    } else if (yr.hi < xr.lo) {
      t1 = yr.hi;
      t2 = xr.lo;
    } else {
      t1 = yr.lo;
      t2 = xr.hi;
    }
    out.offer(game, {point_with_value(xlp, xr, t2), point_with_value(ylp, yr, t1)});
  }
}

enum class SolveStatus { kSolved, kNoSolution, kStalled };

constexpr int kNewtonStarts = 8;

// Damped Newton (Levenberg-Marquardt) on the indifference system of one
// support profile. Unknowns: probabilities on each support, then v_i.
// Start 0 is the uniform profile; later starts are fixed pseudo-random
// interior points.
SolveStatus solve_indifference(const NormalFormGame& game, const std::vector<std::vector<int>>& supports,
                               int start, StrategyProfile& profile) {
  const int n = game.num_players();
  std::vector<int> offset(n + 1, 0);
  for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + static_cast<int>(supports[i].size());
  const int np = offset[n];
  const int dim = np + n;

  auto unpack = [&](const std::vector<double>& z) {
    StrategyProfile p(n);
    for (int i = 0; i < n; ++i) {
      p[i].assign(game.num_actions(i), 0.0);
      for (std::size_t k = 0; k < supports[i].size(); ++k) p[i][supports[i][k]] = z[offset[i] + k];
    }
    return p;
  };
  auto residual = [&](const std::vector<double>& z) {
    StrategyProfile p = unpack(z);
    std::vector<double> f(dim);
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < supports[i].size(); ++k) {
        f[offset[i] + k] = action_payoff(game, i, supports[i][k], p) - z[np + i];
        sum += z[offset[i] + k];
      }
      f[np + i] = sum - 1.0;
    }
    return f;
  };
  auto norm = [](const std::vector<double>& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  };

  std::vector<double> z(dim, 0.0);
  std::mt19937_64 rng(start);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < supports[i].size(); ++k) {
      z[offset[i] + k] = start == 0 ? 1.0 : weight(rng);
      total += z[offset[i] + k];
    }
    for (std::size_t k = 0; k < supports[i].size(); ++k) z[offset[i] + k] /= total;
  }
  {
    StrategyProfile p = unpack(z);
    for (int i = 0; i < n; ++i) z[np + i] = action_payoff(game, i, supports[i][0], p);
  }
  std::vector<double> f = residual(z);
  double lambda = 1e-3;
  for (int iter = 0; iter < 200 && norm(f) >= 1e-10; ++iter) {
    // Jacobian, row-major dim x dim.
    StrategyProfile p = unpack(z);
    std::vector<std::vector<double>> jac(dim, std::vector<double>(dim, 0.0));
    for (int i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < supports[i].size(); ++k) {
        int row = offset[i] + k;
        jac[row][np + i] = -1.0;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          MixedStrategy saved = p[j];
          for (std::size_t l = 0; l < supports[j].size(); ++l) {
            std::fill(p[j].begin(), p[j].end(), 0.0);
            p[j][supports[j][l]] = 1.0;
            jac[row][offset[j] + l] = action_payoff(game, i, supports[i][k], p);
          }
          p[j] = saved;
        }
      }
      for (std::size_t k = 0; k < supports[i].size(); ++k) jac[np + i][offset[i] + k] = 1.0;
    }
    std::vector<std::vector<double>> jtj(dim, std::vector<double>(dim, 0.0));
    std::vector<double> jtf(dim, 0.0);
    for (int a = 0; a < dim; ++a) {
      for (int r = 0; r < dim; ++r) jtf[a] -= jac[r][a] * f[r];
      for (int b = 0; b < dim; ++b) {
        double s = 0.0;
        for (int r = 0; r < dim; ++r) s += jac[r][a] * jac[r][b];
        jtj[a][b] = s;
      }
    }
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      auto m = jtj;
      for (int a = 0; a < dim; ++a) m[a][a] += lambda * (1.0 + jtj[a][a]);
      std::vector<double> step;
      try {
        step = solve_dense(m, jtf);
      } catch (const SolverError&) {
        lambda *= 4.0;
        continue;
      }
      std::vector<double> trial(dim);
      for (int a = 0; a < dim; ++a) trial[a] = z[a] + step[a];
      auto ft = residual(trial);
      if (norm(ft) < norm(f)) {
        z = std::move(trial);
        f = std::move(ft);
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
  }
  if (norm(f) >= 1e-10) {
    // A residual that stays large means the system has no root; a small
    // one that never reaches tolerance is a numerical stall.
    return norm(f) < 1e-4 ? SolveStatus::kStalled : SolveStatus::kNoSolution;
  }
  for (int a = 0; a < np; ++a) {
    if (z[a] < -1e-9) return SolveStatus::kNoSolution;
  }
  profile = unpack(z);
  return SolveStatus::kSolved;
}

void enumerate_many_player(const NormalFormGame& game, Collector& out, int& skipped, int starts) {
  const int n = game.num_players();
  std::vector<std::vector<std::vector<int>>> per_player(n);
  for (int i = 0; i < n; ++i) per_player[i] = ordered_supports(game.num_actions(i));
  std::vector<std::vector<int>> combos;
  std::vector<int> idx(n, 0);
  while (true) {
    combos.push_back(idx);
    int p = n - 1;
    while (p >= 0 && ++idx[p] == static_cast<int>(per_player[p].size())) idx[p--] = 0;
    if (p < 0) break;
  }
  auto total = [&](const std::vector<int>& c) {
    std::size_t s = 0;
    for (int i = 0; i < n; ++i) s += per_player[i][c[i]].size();
    return s;
  };
  std::stable_sort(combos.begin(), combos.end(),
                   [&](const auto& a, const auto& b) { return total(a) < total(b); });
  for (const auto& c : combos) {
    std::vector<std::vector<int>> supports(n);
    for (int i = 0; i < n; ++i) supports[i] = per_player[i][c[i]];
    StrategyProfile profile;
    SolveStatus status = SolveStatus::kNoSolution;
    for (int start = 0; start < starts && status != SolveStatus::kSolved; ++start) {
      status = solve_indifference(game, supports, start, profile);
    }
    if (status == SolveStatus::kSolved) out.offer(game, std::move(profile));
    if (status == SolveStatus::kStalled) ++skipped;
  }
}

EquilibriumResult pick(const NormalFormGame& game, Collector& out, int skipped) {
  if (out.best < 0) throw SolverError("support enumeration found no Nash equilibrium");
  EquilibriumResult r;
  r.kind = EquilibriumKind::kNash;
  r.profile = out.found[out.best];
  r.values = out.values[out.best];
  r.joint = product_distribution(game, r.profile);
  r.epsilon = std::max(0.0, nash_gain(game, r.profile));
  r.skipped_supports = skipped;
  return r;
}

// Regret rows shared by both correlated-equilibrium LPs; `width` >= |A|.
void add_ce_constraints(const NormalFormGame& game, LinearProgram& lp, int width) {
  const std::size_t na = game.num_profiles();
  std::vector<double> simplex(width, 0.0);
  std::fill(simplex.begin(), simplex.begin() + na, 1.0);
  lp.add(std::move(simplex), Relation::kEqual, 1.0);
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a = 0; a < game.num_actions(i); ++a) {
      for (int b = 0; b < game.num_actions(i); ++b) {
        if (a == b) continue;
        std::vector<double> row(width, 0.0);
        bool any = false;
        for (std::size_t k = 0; k < na; ++k) {
          if (game.action_of(k, i) != a) continue;
          row[k] = game.utility(k, i) - game.utility(game.with_action(k, i, b), i);
          any = any || row[k] != 0.0;
        }
        if (any) lp.add(std::move(row), Relation::kGreaterEqual, 0.0);
      }
    }
  }
}

EquilibriumResult correlated_result(const NormalFormGame& game, const std::vector<double>& x) {
  EquilibriumResult r;
  r.kind = EquilibriumKind::kCorrelated;
  r.joint.assign(x.begin(), x.begin() + game.num_profiles());
  normalize(r.joint);
  r.values = expected_utilities(game, r.joint);
  r.epsilon = std::max(0.0, correlated_gain(game, r.joint));
  return r;
}

}  // namespace

double welfare(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double spread(const std::vector<double>& values) {
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

BestResponse best_response_value(const NormalFormGame& game, int player,
                                 const StrategyProfile& profile) {
  BestResponse best{-kInf, 0};
  for (int a = 0; a < game.num_actions(player); ++a) {
    double v = action_payoff(game, player, a, profile);
    if (v > best.value) best = {v, a};
  }
  return best;
}

double nash_gain(const NormalFormGame& game, const StrategyProfile& profile) {
  auto values = expected_utilities(game, profile);
  double gain = -kInf;
  for (int i = 0; i < game.num_players(); ++i) {
    gain = std::max(gain, best_response_value(game, i, profile).value - values[i]);
  }
  return gain;
}

double correlated_gain(const NormalFormGame& game, const JointDistribution& joint) {
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a = 0; a < game.num_actions(i); ++a) {
      for (int b = 0; b < game.num_actions(i); ++b) {
        if (a == b) continue;
        double regret = 0.0;
        for (std::size_t k = 0; k < game.num_profiles(); ++k) {
          if (game.action_of(k, i) != a || joint[k] == 0.0) continue;
          regret += joint[k] * (game.utility(game.with_action(k, i, b), i) - game.utility(k, i));
        }
        worst = std::max(worst, regret);
      }
    }
  }
  return worst;
}

bool check_epsilon_ne(const NormalFormGame& game, const StrategyProfile& profile, double eps) {
  validate_profile(game, profile);
  return nash_gain(game, profile) <= eps;
}

bool check_ce(const NormalFormGame& game, const JointDistribution& joint, double eps) {
  validate_joint(game, joint);
  return correlated_gain(game, joint) <= eps;
}

EquilibriumResult find_ne(const NormalFormGame& game, Criterion criterion) {
  Collector out{criterion, {}, {}, -1};
  int skipped = 0;
  if (game.num_players() == 1) {
    int best = 0;
    for (int a = 1; a < game.num_actions(0); ++a) {
      if (game.utility(a, 0) > game.utility(best, 0)) best = a;
    }
    MixedStrategy s(game.num_actions(0), 0.0);
    s[best] = 1.0;
    out.offer(game, {s});
  } else if (game.num_players() == 2) {
    enumerate_two_player(game, out);
  } else {
    if (game.num_profiles() > 64) {
      throw InputError("Nash equilibria for more than two players need at most 64 joint actions");
    }
    enumerate_many_player(game, out, skipped, 1);
    if (out.best < 0) {
      // Retry every support from several starting points.
      skipped = 0;
      enumerate_many_player(game, out, skipped, kNewtonStarts);
    }
  }
  return pick(game, out, skipped);
}

EquilibriumResult find_ce(const NormalFormGame& game, Criterion criterion) {
  const int na = static_cast<int>(game.num_profiles());
  const int n = game.num_players();
  if (criterion == Criterion::kSocialWelfare) {
    LinearProgram lp(na, Sense::kMaximize);
    for (int k = 0; k < na; ++k) lp.objective[k] = welfare({game.utilities(k).begin(), game.utilities(k).end()});
    add_ce_constraints(game, lp, na);
    LpResult res = lp_solve(lp);
    if (res.status != LpStatus::kOptimal) throw SolverError("correlated equilibrium LP failed");
    return correlated_result(game, res.x);
  }
  // Variables: tau (na), v_1..v_n, v_min, v_max.
  const int width = na + n + 2;
  const int vmin = na + n, vmax = na + n + 1;
  LinearProgram lp(width, Sense::kMinimize);
  for (int j = na; j < width; ++j) lp.lower[j] = -kInf;
  add_ce_constraints(game, lp, width);
  for (int i = 0; i < n; ++i) {
    std::vector<double> def(width, 0.0);
    for (int k = 0; k < na; ++k) def[k] = game.utility(k, i);
    def[na + i] = -1.0;
    lp.add(std::move(def), Relation::kEqual, 0.0);
    std::vector<double> low(width, 0.0);
    low[na + i] = 1.0;
    low[vmin] = -1.0;
    lp.add(std::move(low), Relation::kGreaterEqual, 0.0);
    std::vector<double> high(width, 0.0);
    high[na + i] = 1.0;
    high[vmax] = -1.0;
    lp.add(std::move(high), Relation::kLessEqual, 0.0);
  }
  lp.objective[vmax] = 1.0;
  lp.objective[vmin] = -1.0;
  LpResult first = lp_solve(lp);
  if (first.status != LpStatus::kOptimal) throw SolverError("fair correlated equilibrium LP failed");
  const double best_spread = first.objective;

  std::vector<double> cap(width, 0.0);
  cap[vmax] = 1.0;
  cap[vmin] = -1.0;
  lp.add(std::move(cap), Relation::kLessEqual, best_spread + 1e-9);
  lp.sense = Sense::kMaximize;
  std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
  for (int i = 0; i < n; ++i) lp.objective[na + i] = 1.0;
  LpResult second = lp_solve(lp);
  if (second.status != LpStatus::kOptimal) return correlated_result(game, first.x);
  return correlated_result(game, second.x);
}

NormalFormGame negate_for_social_cost(const NormalFormGame& game) {
  NormalFormGame out = game;
  for (std::size_t k = 0; k < game.num_profiles(); ++k) {
    for (int i = 0; i < game.num_players(); ++i) out.set_utility(k, i, -game.utility(k, i));
  }
  return out;
}

EquilibriumResult find_equilibrium(const NormalFormGame& game, EquilibriumKind kind,
                                   Criterion criterion, Direction direction) {
  if (direction == Direction::kMax) {
    return kind == EquilibriumKind::kNash ? find_ne(game, criterion) : find_ce(game, criterion);
  }
  NormalFormGame neg = negate_for_social_cost(game);
  EquilibriumResult r =
      kind == EquilibriumKind::kNash ? find_ne(neg, criterion) : find_ce(neg, criterion);
  for (double& v : r.values) v = -v;
  return r;
}

}  // namespace csg
