#pragma once

#include <span>
#include <utility>

#include "ora/types.hpp"

namespace ora {

enum class OptMethod { exact, lp_relaxation };

struct OfflineSolution {
  double value = 0.0;
  // One action index per period for the exact method; empty for the LP
  // relaxation, whose optimum is fractional.
  std::vector<int> actions;
  OptMethod method = OptMethod::exact;
};

// Best reward attainable on the given periods under the given total budget.
// exact: depth-first branch-and-bound, children ordered by decreasing reward,
// pruned with the LP-relaxation bound; throws node_budget_exceeded past the
// node budget. lp_relaxation: fractional optimum with one variable per
// (period, action); identical requests are aggregated first, so cost scales
// with the number of distinct requests rather than the horizon.
OfflineSolution solve_opt(std::span<const ArrivalRequest> periods,
                          const Vec& budget, OptMethod method,
                          long node_budget = 1'000'000);

// Lagrangian dual D(mu) = sum_t conjugate_t(mu) + mu . (rate * horizon).
double dual_value(std::span<const ArrivalRequest> periods, const Vec& mu,
                  const Vec& budget_rate, int horizon);

// Grid search over the box [0, mu_max] at the given per-axis resolution,
// then one pass of coordinate descent probing +/- half a step. Returns the
// best point and its dual value; ties resolved toward the lexicographically
// lowest point. Throws grid_too_coarse when the grid would exceed the node
// budget.
std::pair<Vec, double> minimize_dual(std::span<const ArrivalRequest> periods,
                                     const ProblemParams& params,
                                     double resolution,
                                     long node_budget = 10'000'000);

// Grid search over the same box maximizing the realized reward of greedily
// following the fixed dual under the full budget rho*T. Ties resolved toward
// the lexicographically lowest point.
std::pair<Vec, double> find_perfect_dual(std::span<const ArrivalRequest> periods,
                                         const ProblemParams& params,
                                         double resolution,
                                         long node_budget = 10'000'000);

// Default per-axis resolution: mu_max_j / 40.
Vec default_grid_resolution(const ProblemParams& params);

}  // namespace ora
