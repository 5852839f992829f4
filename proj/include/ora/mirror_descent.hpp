#pragma once

#include <span>

#include "ora/trajectory.hpp"
#include "ora/types.hpp"

namespace ora {

// Mirror-map generator h for the dual update. Both kinds admit closed-form
// prox steps; sigma is the strong-convexity modulus with respect to the
// 1-norm on the dual box (euclidean: h is 1-strongly convex in the 2-norm,
// and ||v||_2^2 >= ||v||_1^2 / m gives sigma = 1/m; shifted entropy: h'' =
// 1/(x+shift) >= 1/(max mu_max + shift) on the box, divided by m the same
// way). sigma_per_coordinate records the per-axis modulus before that
// conversion.
struct ReferenceFunction {
  enum class Kind { euclidean, shifted_entropy };
  Kind kind = Kind::euclidean;
  double sigma = 1.0;
  double sigma_per_coordinate = 1.0;
  double shift = 1.0;  // entropy only

  static ReferenceFunction euclidean(int m);
  static ReferenceFunction shifted_entropy(const ProblemParams& params,
                                           double shift = 1.0);

  double value(const Vec& mu) const;
  // Bregman divergence V_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
  double bregman(const Vec& x, const Vec& y) const;

  // mu_next = argmin_{mu >= 0} phi . mu + V_h(mu, mu_cur) / eta, then clipped
  // to [0, mu_max]. Returns the number of coordinates the clip touched.
  // euclidean: max(0, mu - eta * phi)
  // shifted_entropy: max(0, (mu + shift) * exp(-eta * phi) - shift)
  int step(Vec& mu, const Vec& phi, double eta, const Vec& mu_max) const;
};

// Follow a fixed dual greedily subject to feasibility.
RunTrajectory run_prd(const Instance& inst, const Vec& mu_hat);
RunTrajectory run_prd(const Instance& inst, const Vec& mu_hat, Vec budget);

// Online dual mirror descent: act by best response at mu_t, then update with
// the subgradient phi_t = rho - g_t(x_t). eta = 0 freezes the dual (PRD);
// negative eta is rejected. eta <= 0 passed to step() itself is rejected.
RunTrajectory run_mda(const Instance& inst, const Vec& mu_1, double eta,
                      const ReferenceFunction& h);
RunTrajectory run_mda(const Instance& inst, const Vec& mu_1, double eta,
                      const ReferenceFunction& h, Vec budget,
                      std::span<const ArrivalRequest> periods);

}  // namespace ora
