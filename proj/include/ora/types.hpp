#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ora {

using Vec = std::vector<double>;

// Reason a call failed; the CLI maps these onto process exit codes.
enum class ErrorCode {
  config,             // bad flag/config-file input
  missing_void_action,
  reward_exceeds_bound,
  consumption_out_of_range,
  nonpositive_budget,
  length_mismatch,
  parse,
  infeasible_action,
  nonpositive_step_size,
  invalid_bracket,
  node_budget_exceeded,
  grid_too_coarse,
  bad_weights,
  parameter_violation,
  horizon_too_small,
  block_too_small,
  degenerate_baselines,
  internal,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// One selectable action: index 0 is always the "do nothing" action with zero
// reward and zero consumption. Indices within a request are distinct.
struct Action {
  int index = 0;
  double reward = 0.0;
  Vec consumption;  // length m
};

struct ArrivalRequest {
  std::vector<Action> actions;  // actions.front() must be the void action
  std::string label;
};

using ArrivalSequence = std::vector<ArrivalRequest>;

// Scalars derived from a sequence plus its budget rates. alpha_star and the
// dual box [0, mu_max] are what the algorithms actually consume.
struct ProblemParams {
  int m = 0;           // number of resources
  int T = 0;           // horizon
  Vec rho;             // per-period budget rate, length m, all > 0
  double r_bar = 0.0;  // max reward over all actions
  double g_bar = 0.0;  // max over non-void actions of max-norm(consumption)
  double g_under = 0.0;  // min over non-void actions of max-norm(consumption)
  double rho_under = 0.0;
  double rho_bar = 0.0;
  double alpha_star = 1.0;  // max{ max_j,x g_j(x)/rho_j, 1 }
  Vec mu_max;               // r_bar/rho_j + 1 per resource
  double kappa = 0.0;       // 1-norm of mu_max
};

struct ResourceLedger {
  Vec remaining;
};

struct DualVector {
  Vec values;
};

struct Instance {
  ArrivalSequence seq;
  ProblemParams params;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm1(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v < 0 ? -v : v;
  return s;
}

inline double norm1_diff(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d < 0 ? -d : d;
  }
  return s;
}

inline double norm_inf(const Vec& a) {
  double s = 0.0;
  for (double v : a) {
    double x = v < 0 ? -v : v;
    if (x > s) s = x;
  }
  return s;
}

}  // namespace ora
