#include "ora/mirror_descent.hpp"

#include <algorithm>
#include <cmath>

#include "ora/core.hpp"

namespace ora {

ReferenceFunction ReferenceFunction::euclidean(int m) {
  ReferenceFunction h;
  h.kind = Kind::euclidean;
  h.sigma_per_coordinate = 1.0;
  h.sigma = 1.0 / static_cast<double>(std::max(1, m));
  return h;
}

ReferenceFunction ReferenceFunction::shifted_entropy(
    const ProblemParams& params, double shift) {
  if (!(shift > 0))
    throw Error(ErrorCode::parameter_violation,
                "entropy shift must be positive");
  ReferenceFunction h;
  h.kind = Kind::shifted_entropy;
  h.shift = shift;
  double top = 0.0;
  for (double v : params.mu_max) top = std::max(top, v);
  h.sigma_per_coordinate = 1.0 / (top + shift);
  h.sigma = h.sigma_per_coordinate / static_cast<double>(std::max(1, params.m));
  return h;
}

double ReferenceFunction::value(const Vec& mu) const {
  double s = 0.0;
  if (kind == Kind::euclidean) {
    for (double v : mu) s += 0.5 * v * v;
  } else {
    for (double v : mu) s += (v + shift) * std::log(v + shift);
  }
  return s;
}

double ReferenceFunction::bregman(const Vec& x, const Vec& y) const {
  double s = 0.0;
  if (kind == Kind::euclidean) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      double d = x[j] - y[j];
      s += 0.5 * d * d;
    }
  } else {
    for (std::size_t j = 0; j < x.size(); ++j) {
      double xs = x[j] + shift, ys = y[j] + shift;
      s += xs * std::log(xs / ys) - (xs - ys);
    }
  }
  return s;
}

int ReferenceFunction::step(Vec& mu, const Vec& phi, double eta,
                            const Vec& mu_max) const {
  if (!(eta > 0))
    throw Error(ErrorCode::nonpositive_step_size,
                "mirror step requires a positive step size");
  int clipped = 0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    double next;
    if (kind == Kind::euclidean) {
      next = mu[j] - eta * phi[j];
    } else {
      next = (mu[j] + shift) * std::exp(-eta * phi[j]) - shift;
    }
    if (next < 0.0) next = 0.0;
    if (next > mu_max[j]) {
      next = mu_max[j];
      ++clipped;
    }
    mu[j] = next;
  }
  return clipped;
}

namespace {

RunTrajectory follow(const Instance& inst, std::span<const ArrivalRequest> periods,
                     Vec budget, Vec mu, double eta,
                     const ReferenceFunction* h, const char* tag) {
  const auto& p = inst.params;
  RunTrajectory traj;
  traj.algorithm = tag;
  traj.initial_budget = budget;
  traj.steps.reserve(periods.size());
  Vec remaining = std::move(budget);
  Vec phi(p.m, 0.0);
  for (const auto& req : periods) {
    const Action& a = best_response(req, mu, remaining);
    StepRecord rec;
    rec.action_index = a.index;
    rec.reward = a.reward;
    rec.consumption = a.consumption;
    rec.mu = mu;
    rec.eta = eta;
    traj.total_reward += a.reward;
    for (int j = 0; j < p.m; ++j) remaining[j] -= a.consumption[j];
    rec.remaining = remaining;
    traj.steps.push_back(std::move(rec));
    if (h && eta > 0) {
      for (int j = 0; j < p.m; ++j) phi[j] = p.rho[j] - a.consumption[j];
      traj.clip_events += h->step(mu, phi, eta, p.mu_max);
    }
  }
  return traj;
}

}  // namespace

RunTrajectory run_prd(const Instance& inst, const Vec& mu_hat) {
  Vec budget(inst.params.m);
  for (int j = 0; j < inst.params.m; ++j)
    budget[j] = inst.params.rho[j] * static_cast<double>(inst.params.T);
  return run_prd(inst, mu_hat, std::move(budget));
}

RunTrajectory run_prd(const Instance& inst, const Vec& mu_hat, Vec budget) {
  return follow(inst, inst.seq, std::move(budget), mu_hat, 0.0, nullptr, "prd");
}

RunTrajectory run_mda(const Instance& inst, const Vec& mu_1, double eta,
                      const ReferenceFunction& h) {
  Vec budget(inst.params.m);
  for (int j = 0; j < inst.params.m; ++j)
    budget[j] = inst.params.rho[j] * static_cast<double>(inst.params.T);
  return run_mda(inst, mu_1, eta, h, std::move(budget), inst.seq);
}

RunTrajectory run_mda(const Instance& inst, const Vec& mu_1, double eta,
                      const ReferenceFunction& h, Vec budget,
                      std::span<const ArrivalRequest> periods) {
  if (eta < 0)
    throw Error(ErrorCode::nonpositive_step_size,
                "step size must be nonnegative; zero freezes the dual");
  return follow(inst, periods, std::move(budget), mu_1, eta,
                eta > 0 ? &h : nullptr, "mda");
}

}  // namespace ora
