#include "ora/offline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>

#include "ora/core.hpp"

namespace ora {

namespace {

// ---- dense simplex on the aggregated fractional relaxation ----------------
//
// Identical requests are interchangeable in the relaxation, so the LP has one
// convexity row per distinct request rather than per period. All constraints
// are <= with nonnegative right-hand sides, which makes the slack basis
// feasible and a single primal phase sufficient. Bland's rule keeps the tiny
// tableaus cycle-free.

struct AggregatedLp {
  struct Group {
    const ArrivalRequest* rep = nullptr;
    double count = 0.0;
  };
  std::vector<Group> groups;
};

AggregatedLp aggregate(std::span<const ArrivalRequest> periods) {
  AggregatedLp lp;
  std::unordered_map<std::string, std::size_t> seen;
  std::string key;
  for (const auto& req : periods) {
    key.clear();
    for (const auto& a : req.actions) {
      key.append(reinterpret_cast<const char*>(&a.index), sizeof(a.index));
      key.append(reinterpret_cast<const char*>(&a.reward), sizeof(a.reward));
      key.append(reinterpret_cast<const char*>(a.consumption.data()),
                 a.consumption.size() * sizeof(double));
    }
    auto [it, inserted] = seen.emplace(key, lp.groups.size());
    if (inserted)
      lp.groups.push_back({&req, 1.0});
    else
      lp.groups[it->second].count += 1.0;
  }
  return lp;
}

double simplex_value(const AggregatedLp& lp, const Vec& budget) {
  const int m = static_cast<int>(budget.size());
  const int G = static_cast<int>(lp.groups.size());
  int N = 0;
  for (const auto& g : lp.groups)
    N += static_cast<int>(g.rep->actions.size()) - 1;
  const int R = G + m;
  const int cols = N + R + 1;  // structural + slack + rhs

  std::vector<Vec> tab(R + 1, Vec(cols, 0.0));
  std::vector<int> basis(R);

  int col = 0;
  for (int g = 0; g < G; ++g) {
    const auto& req = *lp.groups[g].rep;
    for (std::size_t i = 1; i < req.actions.size(); ++i) {
      const Action& a = req.actions[i];
      tab[g][col] = 1.0;
      for (int j = 0; j < m; ++j) tab[G + j][col] = a.consumption[j];
      tab[R][col] = -a.reward;  // minimize -reward
      ++col;
    }
  }
  for (int r = 0; r < R; ++r) {
    tab[r][N + r] = 1.0;
    basis[r] = N + r;
  }
  for (int g = 0; g < G; ++g) tab[g][cols - 1] = lp.groups[g].count;
  for (int j = 0; j < m; ++j) tab[G + j][cols - 1] = std::max(0.0, budget[j]);

  const double eps = 1e-9;
  const long max_iter = 200L * (R + N + 2);
  for (long iter = 0;; ++iter) {
    if (iter > max_iter)
      throw Error(ErrorCode::internal, "simplex iteration cap hit");
    int enter = -1;
    for (int c = 0; c < N + R; ++c)
      if (tab[R][c] < -eps) {
        enter = c;
        break;  // Bland: lowest eligible index
      }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < R; ++r) {
      if (tab[r][enter] > 1e-11) {
        double ratio = tab[r][cols - 1] / tab[r][enter];
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0)
      throw Error(ErrorCode::internal, "unbounded relaxation");
    double piv = tab[leave][enter];
    for (int c = 0; c < cols; ++c) tab[leave][c] /= piv;
    for (int r = 0; r <= R; ++r) {
      if (r == leave) continue;
      double f = tab[r][enter];
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) tab[r][c] -= f * tab[leave][c];
    }
    basis[leave] = enter;
  }
  return tab[R][cols - 1];  // accumulated -(-reward)
}

double lp_value(std::span<const ArrivalRequest> periods, const Vec& budget) {
  if (periods.empty()) return 0.0;
  return simplex_value(aggregate(periods), budget);
}

// Greedy play of a fixed dual against a private ledger; shared by the exact
// incumbent and the perfect-dual search.
double follow_dual_reward(std::span<const ArrivalRequest> periods,
                          const Vec& mu, Vec ledger) {
  double total = 0.0;
  for (const auto& req : periods) {
    const Action& a = best_response(req, mu, ledger);
    total += a.reward;
    for (std::size_t j = 0; j < ledger.size(); ++j)
      ledger[j] -= a.consumption[j];
  }
  return total;
}

struct BranchAndBound {
  std::span<const ArrivalRequest> periods;
  Vec budget;
  long node_budget = 0;
  long nodes = 0;
  double best_value = 0.0;
  std::vector<int> best_actions;
  std::vector<int> current;

  void run() {
    const int n = static_cast<int>(periods.size());
    current.assign(n, 0);
    // Greedy incumbent tightens pruning from the start.
    best_actions.assign(n, 0);
    best_value = 0.0;
    {
      Vec ledger = budget;
      Vec zero(budget.size(), 0.0);
      for (int t = 0; t < n; ++t) {
        const Action& a = best_response(periods[t], zero, ledger);
        best_actions[t] = a.index;
        best_value += a.reward;
        for (std::size_t j = 0; j < ledger.size(); ++j)
          ledger[j] -= a.consumption[j];
      }
    }
    Vec ledger = budget;
    dfs(0, 0.0, ledger);
  }

  void dfs(int t, double value, Vec& ledger) {
    if (++nodes > node_budget)
      throw Error(ErrorCode::node_budget_exceeded,
                  "branch-and-bound exceeded node budget of " +
                      std::to_string(node_budget));
    const int n = static_cast<int>(periods.size());
    if (t == n) {
      if (value > best_value + 1e-12) {
        best_value = value;
        best_actions = current;
      }
      return;
    }
    double bound = value + lp_value(periods.subspan(t), ledger);
    if (bound <= best_value + 1e-7) return;

    const auto& req = periods[t];
    std::vector<const Action*> order;
    order.reserve(req.actions.size());
    for (const auto& a : req.actions) {
      bool fits = true;
      for (std::size_t j = 0; j < ledger.size(); ++j)
        if (a.consumption[j] > ledger[j]) {
          fits = false;
          break;
        }
      if (fits) order.push_back(&a);
    }
    std::sort(order.begin(), order.end(), [](const Action* a, const Action* b) {
      if (a->reward != b->reward) return a->reward > b->reward;
      return a->index < b->index;
    });
    for (const Action* a : order) {
      current[t] = a->index;
      for (std::size_t j = 0; j < ledger.size(); ++j)
        ledger[j] -= a->consumption[j];
      dfs(t + 1, value + a->reward, ledger);
      for (std::size_t j = 0; j < ledger.size(); ++j)
        ledger[j] += a->consumption[j];
    }
    current[t] = 0;
  }
};

// Shared mixed-radix sweep over the dual grid; visits points in
// lexicographically ascending order so first-found winners are the
// lexicographically lowest.
template <class Eval>
std::pair<Vec, double> grid_sweep(const ProblemParams& params, double step_in,
                                  long node_budget, bool minimize, Eval eval) {
  const int m = params.m;
  Vec step(m);
  std::vector<long> counts(m);
  double total = 1.0;
  for (int j = 0; j < m; ++j) {
    step[j] = step_in > 0 ? step_in : params.mu_max[j] / 40.0;
    if (!(step[j] > 0))
      throw Error(ErrorCode::grid_too_coarse, "grid step must be positive");
    counts[j] = static_cast<long>(std::floor(params.mu_max[j] / step[j] + 1e-9)) + 1;
    total *= static_cast<double>(counts[j]);
    if (total > static_cast<double>(node_budget))
      throw Error(ErrorCode::grid_too_coarse,
                  "dual grid would exceed the node budget");
  }

  std::vector<long> idx(m, 0);
  Vec mu(m, 0.0);
  Vec best_mu(m, 0.0);
  double best = 0.0;
  bool first = true;
  for (;;) {
    for (int j = 0; j < m; ++j) mu[j] = step[j] * static_cast<double>(idx[j]);
    double v = eval(mu);
    if (first || (minimize ? v < best : v > best)) {
      best = v;
      best_mu = mu;
      first = false;
    }
    int j = m - 1;
    for (; j >= 0; --j) {
      if (++idx[j] < counts[j]) break;
      idx[j] = 0;
    }
    if (j < 0) break;
  }
  return {best_mu, best};
}

}  // namespace

OfflineSolution solve_opt(std::span<const ArrivalRequest> periods,
                          const Vec& budget, OptMethod method,
                          long node_budget) {
  OfflineSolution sol;
  sol.method = method;
  if (method == OptMethod::lp_relaxation) {
    sol.value = lp_value(periods, budget);
    return sol;
  }
  BranchAndBound bb;
  bb.periods = periods;
  bb.budget = budget;
  bb.node_budget = node_budget;
  bb.run();
  sol.value = bb.best_value;
  sol.actions = std::move(bb.best_actions);
  return sol;
}

double dual_value(std::span<const ArrivalRequest> periods, const Vec& mu,
                  const Vec& budget_rate, int horizon) {
  double d = 0.0;
  for (const auto& req : periods) d += conjugate_value(req, mu);
  d += dot(mu, budget_rate) * static_cast<double>(horizon);
  return d;
}

std::pair<Vec, double> minimize_dual(std::span<const ArrivalRequest> periods,
                                     const ProblemParams& params,
                                     double resolution, long node_budget) {
  Vec rate = params.rho;
  auto eval = [&](const Vec& mu) {
    return dual_value(periods, mu, rate, params.T);
  };
  auto [mu, value] =
      grid_sweep(params, resolution, node_budget, /*minimize=*/true, eval);

  // One refinement pass: per coordinate, probe half a grid step either way.
  for (int j = 0; j < params.m; ++j) {
    double step = resolution > 0 ? resolution : params.mu_max[j] / 40.0;
    for (double delta : {-0.5 * step, 0.5 * step}) {
      double probe = std::clamp(mu[j] + delta, 0.0, params.mu_max[j]);
      if (probe == mu[j]) continue;
      Vec cand = mu;
      cand[j] = probe;
      double v = eval(cand);
      if (v < value) {
        value = v;
        mu = cand;
      }
    }
  }
  return {mu, value};
}

std::pair<Vec, double> find_perfect_dual(std::span<const ArrivalRequest> periods,
                                         const ProblemParams& params,
                                         double resolution, long node_budget) {
  Vec full_budget(params.m);
  for (int j = 0; j < params.m; ++j)
    full_budget[j] = params.rho[j] * static_cast<double>(params.T);
  auto eval = [&](const Vec& mu) {
    return follow_dual_reward(periods, mu, full_budget);
  };
  return grid_sweep(params, resolution, node_budget, /*minimize=*/false, eval);
}

Vec default_grid_resolution(const ProblemParams& params) {
  Vec steps(params.m);
  for (int j = 0; j < params.m; ++j) steps[j] = params.mu_max[j] / 40.0;
  return steps;
}

}  // namespace ora
