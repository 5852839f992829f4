#include "ora/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ora/core.hpp"

namespace ora {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double psi(double eta, int t_prime, double alpha, double beta,
           ReplayStatsProvider& stats) {
  double th = stats.theta(eta, t_prime);
  double denom = std::sqrt(alpha * stats.phi_sum(eta, t_prime) + beta);
  if (denom == 0.0) return th > 0.0 ? kInf : 0.0;
  return th / denom;
}

}  // namespace

RfbResult root_finding_bisection(double eta_lo, double eta_hi, int t_prime,
                                 double alpha, double beta,
                                 ReplayStatsProvider& stats) {
  if (!(eta_lo > 0) || !(eta_hi > eta_lo))
    throw Error(ErrorCode::invalid_bracket,
                "bisection bracket requires 0 < eta_lo < eta_hi");
  if (t_prime < 0)
    throw Error(ErrorCode::invalid_bracket, "prefix length must be >= 0");

  RfbResult res;
  if (eta_hi <= psi(eta_hi, t_prime, alpha, beta, stats)) {
    res.finite = false;
    res.eta = kInf;
    return res;
  }
  if (eta_lo > psi(eta_lo, t_prime, alpha, beta, stats)) {
    res.eta = eta_lo;
    return res;
  }
  while (eta_hi > 2.0 * eta_lo) {
    ++res.iterations;
    double mid = std::sqrt(eta_hi * eta_lo);
    if (mid <= psi(mid, t_prime, alpha, beta, stats))
      eta_lo = mid;
    else
      eta_hi = mid;
  }
  double ratio = psi(eta_hi, t_prime, alpha, beta, stats) / eta_hi;
  if (stats.theta(eta_hi, t_prime) <= stats.theta(eta_lo, t_prime) * ratio)
    res.eta = eta_hi;
  else
    res.eta = eta_lo;
  return res;
}

double tuner_confidence_term(int k, int horizon, int t) {
  double l = std::log(6.0 * static_cast<double>(t));
  return 2.0 * static_cast<double>(k) +
         std::log(60.0 * static_cast<double>(horizon) * l * l);
}

double tune_step(int t, double eta_t, const TunerConfig& tuner, int horizon,
                 double g_bar, double rho_bar, ReplayStatsProvider& stats,
                 std::vector<TunerProbe>* debug) {
  if (t < 1)
    throw Error(ErrorCode::parameter_violation, "tune_step needs t >= 1");
  if (tuner.k_cap < 2)
    throw Error(ErrorCode::parameter_violation, "k_cap must be at least 2");

  double result = eta_t;
  bool any_finite = false;
  for (int k = 2; k <= tuner.k_cap; k *= 2) {
    // 2^(2^k) as a double; k_cap is validated at run start so this stays
    // finite for the configured schedule, but a grown eta_t can still
    // overflow the bracket, in which case the probe is skipped.
    double factor = std::ldexp(1.0, 1 << k);
    double hi = factor * eta_t;
    if (!std::isfinite(hi)) continue;
    int t_k = t / (2 * k);
    double c = tuner_confidence_term(k, horizon, t);
    double alpha = 1024.0 * c;
    double beta_root = 32.0 * c * (g_bar + rho_bar);
    double beta = beta_root * beta_root;
    RfbResult r = root_finding_bisection(eta_t, hi, t_k, alpha, beta, stats);
    if (debug)
      debug->push_back({t, k, eta_t, hi, r.finite ? r.eta : kInf});
    if (r.finite && (!tuner.first_finite || !any_finite)) result = r.eta;
    if (r.finite) any_finite = true;
  }
  return result;
}

ReplayEngine::ReplayEngine(const ProblemParams& params, Vec mu_hat,
                           const ReferenceFunction& h, Vec initial_budget,
                           std::size_t cache_cap)
    : params_(params),
      mu_hat_(std::move(mu_hat)),
      h_(h),
      initial_budget_(std::move(initial_budget)),
      cache_cap_(cache_cap) {}

void ReplayEngine::observe(const ArrivalRequest& req) {
  prefix_.push_back(&req);
}

ReplayEngine::Entry& ReplayEngine::entry_for(double eta, int t_prime) {
  if (t_prime > observed())
    throw Error(ErrorCode::parameter_violation,
                "replay prefix longer than the observed sequence");
  auto it = entries_.find(eta);
  if (it == entries_.end()) {
    if (entries_.size() >= cache_cap_) {
      auto victim = entries_.begin();
      for (auto jt = entries_.begin(); jt != entries_.end(); ++jt)
        if (jt->second.stamp < victim->second.stamp) victim = jt;
      entries_.erase(victim);
    }
    Entry e;
    e.mu = mu_hat_;
    e.ledger = initial_budget_;
    e.theta_at.push_back(0.0);
    e.phi_sum_at.push_back(0.0);
    e.mu_at.push_back(mu_hat_);
    it = entries_.emplace(eta, std::move(e)).first;
  }
  it->second.stamp = ++clock_;
  extend(it->second, eta, t_prime);
  return it->second;
}

void ReplayEngine::extend(Entry& e, double eta, int upto) {
  Vec phi(params_.m, 0.0);
  while (e.len < upto) {
    const ArrivalRequest& req = *prefix_[e.len];
    // theta at prefix s covers the duals entering periods 1..s.
    double th = std::max(e.theta_at.back(), norm1_diff(mu_hat_, e.mu));
    const Action& a = best_response(req, e.mu, e.ledger);
    for (int j = 0; j < params_.m; ++j) {
      e.ledger[j] -= a.consumption[j];
      phi[j] = params_.rho[j] - a.consumption[j];
    }
    double pn = norm_inf(phi);
    e.theta_at.push_back(th);
    e.phi_sum_at.push_back(e.phi_sum_at.back() + pn * pn);
    if (eta > 0) h_.step(e.mu, phi, eta, params_.mu_max);
    e.mu_at.push_back(e.mu);
    ++e.len;
  }
}

double ReplayEngine::theta(double eta, int t_prime) {
  return entry_for(eta, t_prime).theta_at[t_prime];
}

double ReplayEngine::phi_sum(double eta, int t_prime) {
  return entry_for(eta, t_prime).phi_sum_at[t_prime];
}

Vec ReplayEngine::dual_after(double eta, int t_prime) {
  return entry_for(eta, t_prime).mu_at[t_prime];
}

RunTrajectory run_sa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const TunerConfig& tuner) {
  Vec budget(inst.params.m);
  for (int j = 0; j < inst.params.m; ++j)
    budget[j] = inst.params.rho[j] * static_cast<double>(inst.params.T);
  return run_sa(inst, mu_hat, h, tuner, std::move(budget), inst.seq);
}

RunTrajectory run_sa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const TunerConfig& tuner,
                     Vec budget, std::span<const ArrivalRequest> periods,
                     std::vector<TunerProbe>* debug) {
  const auto& p = inst.params;
  const int horizon = static_cast<int>(periods.size());
  if (horizon == 0) {
    RunTrajectory empty;
    empty.algorithm = "sa";
    empty.initial_budget = std::move(budget);
    return empty;
  }
  double eta = tuner.eta_1 > 0 ? tuner.eta_1 : 1.0 / horizon;
  if (tuner.k_cap < 2)
    throw Error(ErrorCode::parameter_violation, "k_cap must be at least 2");
  for (int k = 2; k <= tuner.k_cap; k *= 2) {
    if (k > 30 || !std::isfinite(std::ldexp(eta, 1 << k)))
      throw Error(ErrorCode::parameter_violation,
                  "k_cap overflows the step-size bracket for eta_1");
  }

  RunTrajectory traj;
  traj.algorithm = "sa";
  traj.initial_budget = budget;
  traj.steps.reserve(horizon);

  ReplayEngine engine(p, mu_hat, h, budget);
  Vec mu = mu_hat;
  Vec remaining = std::move(budget);
  for (int t = 1; t <= horizon; ++t) {
    const ArrivalRequest& req = periods[t - 1];
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

    engine.observe(req);
    double eta_next =
        tune_step(t, eta, tuner, horizon, p.g_bar, p.rho_bar, engine, debug);
    mu = engine.dual_after(eta_next, t);
    eta = eta_next;
  }
  return traj;
}

}  // namespace ora
