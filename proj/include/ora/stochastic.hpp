#pragma once

#include <list>
#include <span>
#include <unordered_map>

#include "ora/mirror_descent.hpp"
#include "ora/trajectory.hpp"
#include "ora/types.hpp"

namespace ora {

// Source of replayed-run statistics for the step-size search:
//   theta(eta, t')   = max_{s <= t'} ||mu_hat - mu_s(mu_hat, eta)||_1
//   phi_sum(eta, t') = sum_{s <= t'} ||rho - g_s(x_s(mu_hat, eta))||_inf^2
// where mu_s / x_s come from rerunning the dual update at fixed eta over the
// observed request prefix. Tests stub this interface directly.
struct ReplayStatsProvider {
  virtual ~ReplayStatsProvider() = default;
  virtual double theta(double eta, int t_prime) = 0;
  virtual double phi_sum(double eta, int t_prime) = 0;
};

struct RfbResult {
  double eta = 0.0;
  bool finite = true;  // false encodes the +infinity return
  int iterations = 0;  // bisection loop count
};

// Geometric bisection for a fixed point of psi(eta) = theta / sqrt(alpha *
// phi_sum + beta) over the bracket [eta_lo, eta_hi]:
//   psi(eta_hi) >= eta_hi          -> +infinity (no usable root below hi)
//   psi(eta_lo) <  eta_lo          -> eta_lo
//   otherwise bisect at sqrt(lo*hi) until hi <= 2 lo, then return eta_hi
//   exactly when theta(eta_hi) <= theta(eta_lo) * psi(eta_hi) / eta_hi,
//   else eta_lo.
// t_prime = 0 makes both statistics zero, hence returns eta_lo.
RfbResult root_finding_bisection(double eta_lo, double eta_hi, int t_prime,
                                 double alpha, double beta,
                                 ReplayStatsProvider& stats);

struct TunerConfig {
  double eta_1 = 0.0;        // <= 0 selects 1/horizon at run start
  int k_cap = 8;             // doubling schedule k = 2, 4, 8, ... <= k_cap
  bool first_finite = false; // keep the first finite bracket result, not the last
};

// 2k + ln(60 * horizon * ln(6t)^2)
double tuner_confidence_term(int k, int horizon, int t);

// One step-size probe row, for the debug log.
struct TunerProbe {
  int t = 0;
  int k = 0;
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  double result = 0.0;  // +inf when the bracket rejected
};

// Runs the doubling schedule at period t and returns eta_{t+1}: each k probes
// the bracket [eta_t, 2^(2^k) eta_t] at prefix length t_k = floor(t / 2k)
// with alpha = 32^2 C and beta = (32 C (g_bar + rho_bar))^2; finite results
// overwrite each other (or only the first is kept, per the config) and an
// all-infinite sweep leaves the step size unchanged.
double tune_step(int t, double eta_t, const TunerConfig& tuner, int horizon,
                 double g_bar, double rho_bar, ReplayStatsProvider& stats,
                 std::vector<TunerProbe>* debug = nullptr);

// Memoized replays of the dual recursion from mu_hat at many fixed step
// sizes over a growing shared prefix. Each step size keeps its own
// hypothetical ledger, evolved from the run's initial budget under the
// replayed actions. Entries extend incrementally and evict least-recently
// used past the cache cap.
class ReplayEngine : public ReplayStatsProvider {
 public:
  ReplayEngine(const ProblemParams& params, Vec mu_hat,
               const ReferenceFunction& h, Vec initial_budget,
               std::size_t cache_cap = 64);

  void observe(const ArrivalRequest& req);
  int observed() const { return static_cast<int>(prefix_.size()); }

  double theta(double eta, int t_prime) override;
  double phi_sum(double eta, int t_prime) override;
  // Dual entering period t_prime + 1, i.e. after t_prime replayed updates.
  Vec dual_after(double eta, int t_prime);

  std::size_t cached_entries() const { return entries_.size(); }

 private:
  struct Entry {
    Vec mu;      // dual after `len` replayed updates
    Vec ledger;  // hypothetical remaining budget after `len` steps
    int len = 0;
    Vec theta_at;             // theta_at[s], s = 0..len
    Vec phi_sum_at;           // phi_sum_at[s], s = 0..len
    std::vector<Vec> mu_at;   // dual after s updates, s = 0..len
    std::uint64_t stamp = 0;
  };

  Entry& entry_for(double eta, int t_prime);
  void extend(Entry& e, double eta, int upto);

  const ProblemParams& params_;
  Vec mu_hat_;
  ReferenceFunction h_;
  Vec initial_budget_;
  std::size_t cache_cap_;
  std::uint64_t clock_ = 0;
  std::vector<const ArrivalRequest*> prefix_;
  std::unordered_map<double, Entry> entries_;
};

// Self-tuning run: act by best response at the current dual, then retune the
// step size and rederive the dual by replaying the observed prefix at the new
// step size from mu_hat.
RunTrajectory run_sa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const TunerConfig& tuner);
RunTrajectory run_sa(const Instance& inst, const Vec& mu_hat,
                     const ReferenceFunction& h, const TunerConfig& tuner,
                     Vec budget, std::span<const ArrivalRequest> periods,
                     std::vector<TunerProbe>* debug = nullptr);

}  // namespace ora
