#include "ora/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ora/core.hpp"
#include "ora/mirror_descent.hpp"
#include "ora/offline.hpp"

namespace ora {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ArrivalRequest void_only_request(int m) {
  ArrivalRequest req;
  Action v;
  v.index = 0;
  v.consumption.assign(m, 0.0);
  req.actions.push_back(std::move(v));
  return req;
}

ArrivalRequest one_action_request(int m, double reward, const Vec& consumption,
                                  std::string label) {
  ArrivalRequest req = void_only_request(m);
  Action a;
  a.index = 1;
  a.reward = reward;
  a.consumption = consumption;
  req.actions.push_back(std::move(a));
  req.label = std::move(label);
  return req;
}

// Random unit vector in the 1-norm via exponential spacings with random
// signs.
Vec unit_l1_direction(int m, std::mt19937_64& rng) {
  Vec dir(m);
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    double e = -std::log(1.0 - u01(rng));
    dir[j] = e;
    total += e;
  }
  for (int j = 0; j < m; ++j) {
    dir[j] /= total;
    if (u01(rng) < 0.5) dir[j] = -dir[j];
  }
  return dir;
}

}  // namespace

Instance gen_stochastic(const DistributionSpec& spec, const Vec& rho, int T) {
  if (spec.support.empty() || spec.support.size() != spec.weights.size())
    throw Error(ErrorCode::bad_weights,
                "support and weights must be nonempty and equal length");
  double total = 0.0;
  for (double w : spec.weights) {
    if (w < 0.0)
      throw Error(ErrorCode::bad_weights, "weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::bad_weights, "weights must sum to 1");

  std::mt19937_64 rng(spec.seed);
  ArrivalSequence seq;
  seq.reserve(T);
  for (int t = 0; t < T; ++t) {
    double u = u01(rng);
    double acc = 0.0;
    std::size_t pick = spec.weights.size() - 1;
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
      acc += spec.weights[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    seq.push_back(spec.support[pick]);
  }
  return make_instance(std::move(seq), rho, T);
}

LowerBoundInstance gen_lowerbound(int T, double r_bar, double alpha_star,
                                  LowerBoundVariant variant) {
  if (T < 3)
    throw Error(ErrorCode::parameter_violation,
                "construction needs T >= 3 for the 1/ln(T) margin");
  double lnT = std::log(static_cast<double>(T));
  if (!(r_bar / alpha_star > 1.0 + 1.0 / lnT))
    throw Error(ErrorCode::parameter_violation,
                "need r_bar / alpha_star > 1 + 1/ln(T)");
  int boundary = static_cast<int>(
      std::floor((alpha_star - 1.0) / alpha_star * static_cast<double>(T)));
  if (variant == LowerBoundVariant::two && boundary < 1)
    throw Error(ErrorCode::parameter_violation,
                "phase boundary rounds to zero periods");

  ArrivalRequest unit = one_action_request(1, 1.0, {1.0}, "unit");
  ArrivalRequest heavy = one_action_request(1, r_bar, {alpha_star}, "heavy");

  ArrivalSequence seq;
  seq.reserve(T);
  for (int t = 0; t < T; ++t) {
    if (variant == LowerBoundVariant::one || t < boundary)
      seq.push_back(unit);
    else
      seq.push_back(heavy);
  }
  LowerBoundInstance out;
  out.instance = make_instance(std::move(seq), {1.0}, T);
  out.mu_hat = {1.0 + 1.0 / lnT};
  out.phase_boundary = variant == LowerBoundVariant::two ? boundary : T;
  return out;
}

Prediction make_prediction(const Instance& inst, const PredictionSpec& spec,
                           double grid_resolution) {
  const auto& p = inst.params;
  Prediction out;
  out.kappa = spec.kappa > 0 ? spec.kappa : p.kappa;
  auto [mu_star, reward] =
      find_perfect_dual(inst.seq, p, grid_resolution);
  (void)reward;
  out.mu_star = mu_star;

  if (std::isinf(spec.accuracy_a)) {
    out.mu_hat = mu_star;
    out.realized_distance = 0.0;
    out.effective_a = kInf;
    return out;
  }

  double target =
      out.kappa * std::pow(static_cast<double>(p.T), -spec.accuracy_a);
  std::mt19937_64 rng(spec.direction_seed);
  Vec dir = unit_l1_direction(p.m, rng);
  // Largest displacement along dir that stays inside [0, mu_max].
  double reach = kInf;
  for (int j = 0; j < p.m; ++j) {
    if (dir[j] > 0)
      reach = std::min(reach, (p.mu_max[j] - mu_star[j]) / dir[j]);
    else if (dir[j] < 0)
      reach = std::min(reach, mu_star[j] / -dir[j]);
  }
  double d = std::min(target, std::max(0.0, reach));
  out.mu_hat.resize(p.m);
  for (int j = 0; j < p.m; ++j)
    out.mu_hat[j] =
        std::clamp(mu_star[j] + d * dir[j], 0.0, p.mu_max[j]);
  out.realized_distance = norm1_diff(out.mu_hat, mu_star);
  if (out.realized_distance <= 0.0)
    out.effective_a = kInf;
  else
    out.effective_a = -std::log(out.realized_distance / out.kappa) /
                      std::log(static_cast<double>(p.T));
  return out;
}

NondegeneracyReport check_nondegeneracy(const Instance& inst, const Vec& mu_hat,
                                        double zeta, int n_samples,
                                        std::uint64_t seed) {
  const auto& p = inst.params;
  if (zeta < 0)
    throw Error(ErrorCode::parameter_violation, "zeta must be nonnegative");

  auto depletion_under = [&](const std::vector<Vec>& duals) {
    Vec remaining(p.m);
    for (int j = 0; j < p.m; ++j)
      remaining[j] = p.rho[j] * static_cast<double>(p.T);
    std::vector<int> depletion(p.m, p.T);
    for (int t = 0; t < p.T; ++t) {
      const Action& a = best_response(inst.seq[t], duals[t], remaining);
      for (int j = 0; j < p.m; ++j) {
        remaining[j] -= a.consumption[j];
        if (depletion[j] == p.T && remaining[j] < p.g_under)
          depletion[j] = t + 1;
      }
    }
    return depletion;
  };

  NondegeneracyReport rep;
  rep.zeta = zeta;
  rep.samples = n_samples;
  std::vector<Vec> base(p.T, mu_hat);
  rep.base_depletion = depletion_under(base);
  rep.max_abs_deviation.assign(p.m, 0);

  std::mt19937_64 rng(seed);
  std::vector<Vec> duals(p.T);
  for (int s = 0; s < n_samples; ++s) {
    for (int t = 0; t < p.T; ++t) {
      Vec dir = unit_l1_direction(p.m, rng);
      double r = zeta * std::pow(u01(rng), 1.0 / static_cast<double>(p.m));
      Vec mu(p.m);
      for (int j = 0; j < p.m; ++j)
        mu[j] = std::max(0.0, mu_hat[j] + r * dir[j]);
      duals[t] = std::move(mu);
    }
    auto dep = depletion_under(duals);
    for (int j = 0; j < p.m; ++j)
      rep.max_abs_deviation[j] =
          std::max(rep.max_abs_deviation[j],
                   std::abs(dep[j] - rep.base_depletion[j]));
  }
  return rep;
}

}  // namespace ora
