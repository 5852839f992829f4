#include "ora/trajectory.hpp"

namespace ora {

std::vector<int> depletion_profile(const RunTrajectory& traj,
                                   const ProblemParams& params) {
  std::vector<int> out(params.m, params.T);
  for (int j = 0; j < params.m; ++j) {
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      if (traj.steps[t].remaining[j] < params.g_under) {
        out[j] = static_cast<int>(t) + 1;
        break;
      }
    }
  }
  return out;
}

int stopping_time(const RunTrajectory& traj, const ProblemParams& params) {
  Vec used(params.m, 0.0);
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    for (int j = 0; j < params.m; ++j) {
      used[j] += traj.steps[t].consumption[j];
      if (used[j] + params.g_bar >= params.rho[j] * params.T)
        return static_cast<int>(t) + 1;
    }
  }
  return params.T;
}

SlacknessReport slackness(const RunTrajectory& traj,
                          const ProblemParams& params) {
  SlacknessReport rep;
  rep.stopping_time = stopping_time(traj, params);
  rep.per_step.reserve(traj.steps.size());
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const auto& s = traj.steps[t];
    double w = 0.0;
    for (int j = 0; j < params.m; ++j)
      w += s.mu[j] * (params.rho[j] - s.consumption[j]);
    rep.per_step.push_back(w);
    if (static_cast<int>(t) + 1 <= rep.stopping_time)
      rep.sum_to_stopping_time += w;
  }
  return rep;
}

}  // namespace ora
