#include "ora/adversarial.hpp"

#include <cmath>

namespace ora {

double EpsilonFn::operator()(int T) const {
  if (kind == Kind::inv_log) {
    if (T < 3)
      throw Error(ErrorCode::horizon_too_small,
                  "inverse-log factor needs T >= 3");
    return 1.0 / std::log(static_cast<double>(T));
  }
  if (!(exponent > 0.0) || !(exponent < 1.0))
    throw Error(ErrorCode::parameter_violation,
                "power factor exponent must lie in (0, 1)");
  if (T < 1)
    throw Error(ErrorCode::horizon_too_small, "horizon must be positive");
  return std::pow(static_cast<double>(T), -exponent);
}

double aa_step_size(const AAConfig& cfg, int T) {
  if (!(cfg.c > 0.0))
    throw Error(ErrorCode::nonpositive_step_size,
                "step-size scale c must be positive");
  return cfg.c * cfg.epsilon(T) / static_cast<double>(T);
}

RunTrajectory run_aa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const AAConfig& cfg) {
  Vec budget(inst.params.m);
  for (int j = 0; j < inst.params.m; ++j)
    budget[j] = inst.params.rho[j] * static_cast<double>(inst.params.T);
  return run_aa(inst, mu_hat, h, cfg, std::move(budget), inst.seq);
}

RunTrajectory run_aa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const AAConfig& cfg,
                     Vec budget, std::span<const ArrivalRequest> periods) {
  double eta = aa_step_size(cfg, inst.params.T);
  RunTrajectory traj =
      run_mda(inst, mu_hat, eta, h, std::move(budget), periods);
  traj.algorithm = "aa";
  return traj;
}

}  // namespace ora
