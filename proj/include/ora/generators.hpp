#pragma once

#include <cstdint>
#include <random>

#include "ora/types.hpp"

namespace ora {

// Deterministic uniform double in [0, 1) from the top 53 bits of a 64-bit
// draw; avoids distribution objects whose output differs across standard
// libraries.
double u01(std::mt19937_64& rng);

// Finite support over request templates. Weights must be nonnegative and sum
// to 1 within 1e-12.
struct DistributionSpec {
  std::vector<ArrivalRequest> support;
  Vec weights;
  std::uint64_t seed = 0;
};

// T independent draws by inverse CDF over the weights.
Instance gen_stochastic(const DistributionSpec& spec, const Vec& rho, int T);

// Single-resource two-phase construction with rate 1: a unit request
// (reward 1, consumption 1) and a heavy request (reward r_bar, consumption
// alpha_star). variant "one" repeats the unit request for all T; variant
// "two" plays it for floor((alpha_star - 1)/alpha_star * T) periods and the
// heavy request after. The matching prediction is 1 + 1/ln(T), which
// requires r_bar / alpha_star > 1 + 1/ln(T) to leave the heavy request
// profitable, and the phase boundary must round to at least one period.
struct LowerBoundInstance {
  Instance instance;
  Vec mu_hat;
  int phase_boundary = 0;  // periods of the unit phase (variant two)
};

enum class LowerBoundVariant { one, two };

LowerBoundInstance gen_lowerbound(int T, double r_bar, double alpha_star,
                                  LowerBoundVariant variant);

// Synthesize a prediction at a target accuracy level a: find the best fixed
// dual on the realized sequence by grid search, then displace it by
// d = min(kappa * T^(-a), reach of the dual box along a random unit 1-norm
// direction). a = +inf returns the found dual exactly. Records the realized
// displacement and the accuracy level it corresponds to.
struct PredictionSpec {
  double accuracy_a = 0.0;
  double kappa = 0.0;  // <= 0 selects params.kappa
  std::uint64_t direction_seed = 0;
};

struct Prediction {
  Vec mu_hat;
  Vec mu_star;
  double realized_distance = 0.0;
  double effective_a = 0.0;  // +inf when the displacement is zero
  double kappa = 0.0;
};

Prediction make_prediction(const Instance& inst, const PredictionSpec& spec,
                           double grid_resolution = -1.0);

// Perturbation check around a candidate prediction: sample dual sequences
// uniformly from the 1-norm ball of radius zeta (clipped at zero), play each
// greedily, and compare resource depletion times against following the
// candidate exactly. Small spread means the instance does not sit on a knife
// edge at that dual.
struct NondegeneracyReport {
  std::vector<int> base_depletion;        // following mu_hat
  std::vector<int> max_abs_deviation;     // per resource, over samples
  double zeta = 0.0;
  int samples = 0;
};

NondegeneracyReport check_nondegeneracy(const Instance& inst, const Vec& mu_hat,
                                        double zeta, int n_samples,
                                        std::uint64_t seed);

}  // namespace ora
