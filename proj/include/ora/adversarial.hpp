#pragma once

#include <span>

#include "ora/mirror_descent.hpp"
#include "ora/trajectory.hpp"
#include "ora/types.hpp"

namespace ora {

// Slowly-vanishing factor for the conservative step size. inv_log requires
// T >= 3; power requires exponent in (0, 1).
struct EpsilonFn {
  enum class Kind { inv_log, power };
  Kind kind = Kind::inv_log;
  double exponent = 0.5;  // power only

  double operator()(int T) const;
};

struct AAConfig {
  EpsilonFn epsilon;
  double c = 1.0;  // positive scale on epsilon(T)/T
};

// eta = c * epsilon(T) / T.
double aa_step_size(const AAConfig& cfg, int T);

// Mirror descent anchored at the prediction with the conservative step size;
// the dual barely moves, so behavior stays close to following mu_hat while
// retaining a worst-case hedge. The full-instance horizon sets the step size
// even when starting mid-horizon with a partial ledger.
RunTrajectory run_aa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const AAConfig& cfg);
RunTrajectory run_aa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const AAConfig& cfg,
                     Vec budget, std::span<const ArrivalRequest> periods);

}  // namespace ora
