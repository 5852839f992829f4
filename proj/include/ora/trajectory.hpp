#pragma once

#include <string>
#include <vector>

#include "ora/types.hpp"

namespace ora {

// Per-period record of a run: the dual used to decide, the action taken and
// its immediate effects, the ledger after the step, and the step size in
// force at that period (0 when the dual is frozen).
struct StepRecord {
  int action_index = 0;
  double reward = 0.0;
  Vec consumption;
  Vec mu;         // dual entering the period
  Vec remaining;  // ledger after the period
  double eta = 0.0;
};

struct RunTrajectory {
  std::string algorithm;
  std::vector<StepRecord> steps;
  double total_reward = 0.0;
  Vec initial_budget;
  long clip_events = 0;  // times the dual update hit the [0, mu_max] box
};

// First period after which remaining_j < g_under (1-based), else T; one entry
// per resource.
std::vector<int> depletion_profile(const RunTrajectory& traj,
                                   const ProblemParams& params);

// First period t where sum_{s<=t} g_j(x_s) + g_bar >= rho_j * T for some
// resource (1-based), else T.
int stopping_time(const RunTrajectory& traj, const ProblemParams& params);

// Complementary slackness terms w_t = mu_t . (rho - g_t(x_t)) and their
// running sum truncated at the stopping time.
struct SlacknessReport {
  Vec per_step;
  double sum_to_stopping_time = 0.0;
  int stopping_time = 0;
};

SlacknessReport slackness(const RunTrajectory& traj,
                          const ProblemParams& params);

}  // namespace ora
