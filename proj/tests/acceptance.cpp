// Acceptance gate: twelve end-to-end criteria, one [PASS]/[FAIL] line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ora/adversarial.hpp"
#include "ora/core.hpp"
#include "ora/experiment.hpp"
#include "ora/generators.hpp"
#include "ora/io.hpp"
#include "ora/main_alg.hpp"
#include "ora/metrics.hpp"
#include "ora/mirror_descent.hpp"
#include "ora/offline.hpp"
#include "ora/stochastic.hpp"
#include "test_support.hpp"

using namespace ora;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok = false;
  std::string detail;
};

double rand01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

double mean_regret(const std::vector<MetricsRecord>& rows) {
  double sum = 0.0;
  for (const auto& r : rows) sum += r.regret;
  return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
}

bool within_budget(const RunTrajectory& traj, const Vec& cap) {
  Vec used = test_support::consumed(traj);
  for (std::size_t j = 0; j < used.size(); ++j)
    if (used[j] > cap[j]) return false;
  return true;
}

// Constant-statistics stub for the step-size search contract.
struct ConstStats final : ReplayStatsProvider {
  double th;
  double ph;
  ConstStats(double t, double p) : th(t), ph(p) {}
  double theta(double, int) override { return th; }
  double phi_sum(double, int) override { return ph; }
};

// --- criterion 1: exact oracle vs exhaustive search --------------------------

Outcome criterion_exact_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    Instance inst = test_support::random_instance(rng, 8, 3, 2);
    Vec budget = test_support::total_budget(inst);
    OfflineSolution sol = solve_opt(inst.seq, budget, OptMethod::exact);
    double reference = test_support::brute_force_opt(inst.seq, budget);
    if (sol.value != reference)
      return {false, "instance " + std::to_string(rep) + ": oracle " +
                         fmt(sol.value) + " vs exhaustive " + fmt(reference)};
    // The reported plan must reconstruct the reported value feasibly.
    double replay = 0.0;
    Vec left = budget;
    bool feasible = sol.actions.size() == inst.seq.size();
    for (std::size_t t = 0; feasible && t < inst.seq.size(); ++t) {
      const Action& a = inst.seq[t].actions[sol.actions[t]];
      replay += a.reward;
      for (int j = 0; j < inst.params.m; ++j) {
        left[j] -= a.consumption[j];
        if (left[j] < -1e-12) feasible = false;
      }
    }
    if (!feasible || replay != sol.value)
      return {false, "instance " + std::to_string(rep) +
                         ": reported plan does not replay to its value"};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (secs >= 10.0)
    return {false, "200 instances took " + fmt(secs) + "s (budget 10s)"};
  return {true, "200 instances agree exactly in " + fmt(secs) + "s"};
}

// --- criteria 2-4: dual bounds on one shared corpus --------------------------

std::vector<Instance> dual_corpus() {
  std::mt19937_64 rng(202);
  std::vector<Instance> out;
  out.reserve(50);
  for (int i = 0; i < 50; ++i)
    out.push_back(test_support::random_instance(rng, 8, 3, 2));
  return out;
}

Outcome criterion_weak_duality(const std::vector<Instance>& corpus,
                               const std::vector<double>& opts) {
  std::mt19937_64 rng(303);
  double worst = kInf;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Instance& inst = corpus[i];
    for (int draw = 0; draw < 100; ++draw) {
      Vec mu(inst.params.m);
      for (int j = 0; j < inst.params.m; ++j)
        mu[j] = rand01(rng) * 1.5 * inst.params.mu_max[j];
      double d = dual_value(inst.seq, mu, inst.params.rho, inst.params.T);
      worst = std::min(worst, d - opts[i]);
      if (d < opts[i] - 1e-9)
        return {false, "instance " + std::to_string(i) + ": dual " + fmt(d) +
                           " below optimum " + fmt(opts[i])};
    }
  }
  return {true, "5000 duals upper-bound the optimum (tightest slack " +
                    fmt(worst) + ")"};
}

Outcome criterion_dual_minimization(const std::vector<Instance>& corpus,
                                    const std::vector<double>& opts) {
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Instance& inst = corpus[i];
    auto [mu, value] = minimize_dual(inst.seq, inst.params, -1.0);
    double allowance =
        (inst.params.m + 1) * inst.params.r_bar;
    worst = std::max(worst, value - opts[i]);
    if (value > opts[i] + allowance)
      return {false, "instance " + std::to_string(i) + ": minimized dual " +
                         fmt(value) + " exceeds optimum " + fmt(opts[i]) +
                         " + " + fmt(allowance)};
  }
  return {true, "grid minimum within the additive allowance on 50 instances "
                "(largest excess " +
                    fmt(worst) + ")"};
}

Outcome criterion_perfect_dual(const std::vector<Instance>& corpus,
                               const std::vector<double>& opts) {
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Instance& inst = corpus[i];
    auto [mu, reward] = find_perfect_dual(inst.seq, inst.params, -1.0);
    double allowance = (inst.params.g_bar / inst.params.g_under + 1.0) *
                       (inst.params.m + 1) * inst.params.r_bar;
    worst = std::max(worst, opts[i] - reward);
    if (reward + allowance < opts[i])
      return {false, "instance " + std::to_string(i) + ": replayed reward " +
                         fmt(reward) + " + " + fmt(allowance) +
                         " below optimum " + fmt(opts[i])};
  }
  return {true, "best fixed dual is near-optimal on 50 instances (largest "
                "shortfall " +
                    fmt(worst) + ")"};
}

// --- criterion 5: mirror-descent regret slope --------------------------------

Outcome criterion_regret_slope() {
  ExperimentConfig cfg;
  cfg.alg = "mda";
  cfg.trials = 50;
  cfg.seed = 2;
  RegretStudyResult res = regret_study(cfg, {100, 1000, 10000});
  if (!res.slope.has_value())
    return {false, "log-log slope undefined (a mean regret was nonpositive)"};
  double s = *res.slope;
  bool ok = s >= 0.35 && s <= 0.65;
  return {ok, "log-log regret slope " + fmt(s) + " (want [0.35, 0.65])"};
}

// --- criterion 6: self-tuning exploits an exact prediction -------------------

Outcome criterion_self_tuning() {
  ExperimentConfig base;
  base.T = 10000;
  base.trials = 50;
  base.seed = 2;

  ExperimentConfig good = base;
  good.alg = "sa";
  good.prediction = PredictionSource::accuracy;
  good.accuracy_a = kInf;
  double m_good = mean_regret(run_experiment(good));

  ExperimentConfig bad = base;
  bad.alg = "sa";
  bad.prediction = PredictionSource::accuracy;
  bad.accuracy_a = 0.0;
  double m_bad = mean_regret(run_experiment(bad));

  ExperimentConfig blind = base;
  blind.alg = "mda";
  blind.prediction = PredictionSource::inline_values;
  blind.mu_hat_values = {0.0};
  double m_blind = mean_regret(run_experiment(blind));

  bool ok = m_good <= 0.5 * m_bad && m_good <= m_blind;
  return {ok, "mean regret: exact prediction " + fmt(m_good) +
                  ", worst-case prediction " + fmt(m_bad) +
                  ", uninformed descent " + fmt(m_blind)};
}

// --- criterion 7: conservative run on the drift construction -----------------

Outcome criterion_conservative() {
  LowerBoundInstance lb = gen_lowerbound(10000, 4.0, 2.0, LowerBoundVariant::two);
  const Instance& inst = lb.instance;
  Vec budget = test_support::total_budget(inst);
  double opt = solve_opt(inst.seq, budget, OptMethod::lp_relaxation).value;

  ReferenceFunction h = ReferenceFunction::euclidean(inst.params.m);
  double aa = run_aa(inst, lb.mu_hat, h, AAConfig{}).total_reward;
  double prd = run_prd(inst, lb.mu_hat).total_reward;

  bool ok = aa >= 18000.0 && std::abs(opt - 20000.0) <= inst.params.r_bar &&
            std::abs(prd - opt) <= inst.params.r_bar;
  return {ok, "conservative " + fmt(aa) + ", fixed-dual " + fmt(prd) +
                  ", optimum " + fmt(opt)};
}

// --- criterion 8: master quiet on benign traffic, loud on the adversary ------

Outcome criterion_master_switching() {
  // Benign i.i.d. traffic: the test should essentially never fire and the
  // master should track the self-tuning run.
  ExperimentConfig quiet;
  quiet.T = 10000;
  quiet.alg = "main";
  quiet.main.delta = 0.1;
  quiet.trials = 100;
  quiet.seed = 5;
  std::vector<MetricsRecord> main_rows = run_experiment(quiet);
  int switches = 0;
  for (const auto& r : main_rows)
    if (r.switched.has_value() && *r.switched) ++switches;
  double m_main = mean_regret(main_rows);

  ExperimentConfig tuned = quiet;
  tuned.alg = "sa";
  double m_sa = mean_regret(run_experiment(tuned));

  // The drift construction: the test must fire and the suffix recovers.
  LowerBoundInstance lb = gen_lowerbound(10000, 4.0, 2.0, LowerBoundVariant::two);
  MainConfig mc;
  mc.delta = 0.1;
  ReferenceFunction h = ReferenceFunction::euclidean(lb.instance.params.m);
  MainResult drift = run_main(lb.instance, lb.mu_hat, h, mc);

  bool ok = switches <= 10 && m_main <= 2.0 * m_sa &&
            drift.switch_record.switched &&
            drift.trajectory.total_reward >= 12000.0;
  return {ok, "benign: " + std::to_string(switches) +
                  "/100 switches, mean regret " + fmt(m_main) + " vs tuned " +
                  fmt(m_sa) + "; drift: switched at " +
                  std::to_string(drift.switch_record.switch_time) +
                  ", reward " + fmt(drift.trajectory.total_reward)};
}

// --- criterion 9: feasibility sweep over every algorithm ---------------------

Outcome criterion_feasibility() {
  std::mt19937_64 rng(909);
  int per_alg[5] = {0, 0, 0, 0, 0};
  for (int rep = 0; rep < 1000; ++rep) {
    Instance inst = test_support::random_instance(rng, 12, 3, 2);
    ReferenceFunction h = ReferenceFunction::euclidean(inst.params.m);
    Vec mu_hat(inst.params.m);
    for (int j = 0; j < inst.params.m; ++j)
      mu_hat[j] = rand01(rng) * inst.params.mu_max[j];
    int alg = test_support::pick_int(rng, 0, 4);
    ++per_alg[alg];

    RunTrajectory traj;
    if (alg == 0) {
      traj = run_prd(inst, mu_hat);
    } else if (alg == 1) {
      traj = run_mda(inst, mu_hat, 0.3 * rand01(rng), h);
    } else if (alg == 2) {
      traj = run_sa(inst, mu_hat, h, TunerConfig{});
    } else if (alg == 3) {
      AAConfig cfg;
      cfg.epsilon.kind = EpsilonFn::Kind::power;
      cfg.epsilon.exponent = 0.5;
      traj = run_aa(inst, mu_hat, h, cfg);
    } else {
      MainConfig cfg;
      cfg.delta = inst.params.T == 1 ? 1.0 : (rng() % 2 ? 1.0 : 0.51);
      cfg.L = rng() % 2 ? -1.0 : 0.01;
      cfg.literal_pseudocode = rng() % 2 == 0;
      cfg.aa.epsilon.kind = EpsilonFn::Kind::power;
      cfg.aa.epsilon.exponent = 0.5;
      traj = run_main(inst, mu_hat, h, cfg).trajectory;
    }
    if (static_cast<int>(traj.steps.size()) != inst.params.T)
      return {false, "rep " + std::to_string(rep) + ": run recorded " +
                         std::to_string(traj.steps.size()) + " of " +
                         std::to_string(inst.params.T) + " periods"};
    if (!within_budget(traj, test_support::total_budget(inst)))
      return {false, "rep " + std::to_string(rep) + " (alg " +
                         std::to_string(alg) + "): consumption exceeds rho*T"};
  }
  std::string mix;
  for (int a = 0; a < 5; ++a)
    mix += (a ? "/" : "") + std::to_string(per_alg[a]);
  return {true, "1000 runs stayed within budget (prd/mda/sa/aa/main = " + mix +
                    ")"};
}

// --- criterion 10: step-size bisection contract ------------------------------

Outcome criterion_bisection() {
  // Worked examples.
  {
    ConstStats zero(0.0, 0.0);
    RfbResult r = root_finding_bisection(0.1, 10.0, 0, 1.0, 1.0, zero);
    if (!(r.finite && r.eta == 0.1 && r.iterations == 0))
      return {false, "empty-prefix bracket should return its lower edge"};
  }
  {
    ConstStats big(100.0, 1.0);
    RfbResult r = root_finding_bisection(0.25, 1.0, 5, 3.0, 1.0, big);
    if (!(!r.finite && std::isinf(r.eta)))
      return {false, "dominated bracket should reject as infinite"};
  }
  {
    ConstStats unit(1.0, 1.0);
    RfbResult r = root_finding_bisection(0.25, 1.0, 5, 3.0, 1.0, unit);
    if (!(r.finite && r.eta == 0.5 && r.iterations == 1))
      return {false, "hand-traced bracket expected 0.5 after one bisection, "
                     "got " +
                         fmt(r.eta)};
  }
  // Invalid brackets reject loudly.
  {
    ConstStats unit(1.0, 1.0);
    auto rejects = [&unit](double lo, double hi, int tp) {
      try {
        root_finding_bisection(lo, hi, tp, 1.0, 1.0, unit);
      } catch (const Error& e) {
        return e.code == ErrorCode::invalid_bracket;
      }
      return false;
    };
    if (!rejects(0.0, 1.0, 1) || !rejects(-1.0, 1.0, 1) ||
        !rejects(1.0, 1.0, 1) || !rejects(2.0, 1.0, 1) ||
        !rejects(0.1, 1.0, -1))
      return {false, "an invalid bracket was accepted"};
  }
  // Randomized contract: the result is the bracket's lower edge, its upper
  // edge, or infinite, and the loop count respects the doubly logarithmic
  // bound.
  std::mt19937_64 rng(1010);
  for (int rep = 0; rep < 200; ++rep) {
    ConstStats stats(5.0 * rand01(rng), 10.0 * rand01(rng));
    double lo = 1e-4 * (1.0 + 9.0 * rand01(rng));
    double hi = lo * (2.0 + 1e5 * rand01(rng));
    RfbResult r = root_finding_bisection(lo, hi, 17, 1.0 + 9.0 * rand01(rng),
                                         0.1 + rand01(rng), stats);
    if (!r.finite) {
      if (!std::isinf(r.eta))
        return {false, "rep " + std::to_string(rep) +
                           ": infinite flag without infinite value"};
      continue;
    }
    if (r.eta < lo - 1e-15 || r.eta > hi + 1e-15)
      return {false, "rep " + std::to_string(rep) + ": result " + fmt(r.eta) +
                         " escapes [" + fmt(lo) + ", " + fmt(hi) + "]"};
    int bound = static_cast<int>(std::ceil(
                    std::log2(std::log(hi / lo) / std::log(2.0)))) +
                2;
    if (r.iterations > bound)
      return {false, "rep " + std::to_string(rep) + ": " +
                         std::to_string(r.iterations) +
                         " bisections exceed the bound " +
                         std::to_string(bound)};
  }
  return {true, "worked examples, rejection cases, and 200 random brackets"};
}

// --- criterion 11: normalized gap across prediction accuracies ---------------

Outcome criterion_gap_profile() {
  std::string detail;
  const double levels[3] = {0.0, 0.5, kInf};
  const char* names[3] = {"a=0", "a=0.5", "a=inf"};
  for (int i = 0; i < 3; ++i) {
    ExperimentConfig cfg;
    cfg.family.hi_r = 6.0;
    cfg.family.hi_p = 0.4;
    cfg.family.rho = 0.5;
    cfg.T = 10000;
    cfg.alg = "main";
    cfg.main.delta = 0.25;
    cfg.main.tuner.eta_1 = 0.01;
    cfg.main.L = 4.0;
    cfg.kappa = 6.0;
    cfg.prediction = PredictionSource::accuracy;
    cfg.accuracy_a = levels[i];
    cfg.trials = 100;
    cfg.seed = 2;

    GapStudyResult res = gap_study(cfg);
    int defined = 0;
    double sum = 0.0;
    for (const auto& r : res.records)
      if (r.gap.has_value()) {
        ++defined;
        sum += *r.gap;
      }
    if (defined == 0)
      return {false, std::string(names[i]) + ": every trial was degenerate"};
    double mean = sum / defined;

    if (res.histogram.total() != defined)
      return {false, std::string(names[i]) + ": histogram holds " +
                         std::to_string(res.histogram.total()) + " of " +
                         std::to_string(defined) + " defined gaps"};

    // Round-trip the histogram through its CSV form.
    const std::string path =
        "/tmp/ora_acceptance_hist_" + std::to_string(i) + ".csv";
    {
      std::ofstream out(path);
      emit_histogram(out, res.histogram);
    }
    long reparsed = 0;
    {
      std::ifstream in(path);
      std::string line;
      if (!std::getline(in, line) || line != "bin,count")
        return {false, std::string(names[i]) + ": bad histogram header"};
      while (std::getline(in, line)) {
        auto comma = line.find(',');
        if (comma == std::string::npos)
          return {false, std::string(names[i]) + ": bad histogram row"};
        reparsed += std::stol(line.substr(comma + 1));
      }
    }
    if (reparsed != defined)
      return {false, std::string(names[i]) + ": reparsed histogram total " +
                         std::to_string(reparsed) + " != " +
                         std::to_string(defined)};

    if (mean < 0.5)
      return {false, std::string(names[i]) + ": mean gap " + fmt(mean) +
                         " below 0.5 (" + std::to_string(defined) +
                         " defined, " + std::to_string(res.degenerate) +
                         " degenerate)"};
    detail += std::string(i ? ", " : "") + names[i] + " mean " + fmt(mean) +
              " (" + std::to_string(defined) + " defined)";
  }
  return {true, detail};
}

// --- criterion 12: reruns are byte-identical ---------------------------------

Outcome criterion_reproducibility() {
  ExperimentConfig cfg;
  cfg.T = 500;
  cfg.alg = "main";
  cfg.main.delta = 0.25;
  cfg.trials = 5;
  cfg.seed = 13;

  auto render = [](std::vector<MetricsRecord> rows) {
    for (auto& r : rows) r.runtime_ms = 0.0;
    std::ostringstream out;
    emit_report(out, rows);
    return out.str();
  };
  std::string first = render(run_experiment(cfg));
  std::string second = render(run_experiment(cfg));
  bool ok = first == second;
  return {ok, ok ? "two runs emit identical CSV apart from runtimes"
                 : "reruns of one configuration diverge"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&failures](int n, const char* title, const Outcome& out) {
    std::cout << (out.ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": "
              << title << " — " << out.detail << "\n";
    std::cout.flush();
    if (!out.ok) ++failures;
  };
  auto guard = [](auto&& fn) -> Outcome {
    try {
      return fn();
    } catch (const std::exception& e) {
      return {false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "exact oracle matches exhaustive search",
         guard([] { return criterion_exact_oracle(); }));

  std::vector<Instance> corpus;
  std::vector<double> opts;
  try {
    corpus = dual_corpus();
    opts.reserve(corpus.size());
    for (const auto& inst : corpus)
      opts.push_back(
          solve_opt(inst.seq, test_support::total_budget(inst), OptMethod::exact)
              .value);
  } catch (const std::exception& e) {
    corpus.clear();
    std::cout << "[FAIL] criterion 2: dual corpus construction — exception: "
              << e.what() << "\n";
    std::cout << "[FAIL] criterion 3: dual corpus construction — exception: "
              << e.what() << "\n";
    std::cout << "[FAIL] criterion 4: dual corpus construction — exception: "
              << e.what() << "\n";
    failures += 3;
  }
  if (!corpus.empty()) {
    report(2, "every dual upper-bounds the optimum",
           guard([&] { return criterion_weak_duality(corpus, opts); }));
    report(3, "grid dual minimization meets its additive allowance",
           guard([&] { return criterion_dual_minimization(corpus, opts); }));
    report(4, "replaying the best fixed dual is near-optimal",
           guard([&] { return criterion_perfect_dual(corpus, opts); }));
  }

  report(5, "mirror-descent regret scales like sqrt(T)",
         guard([] { return criterion_regret_slope(); }));
  report(6, "self-tuning exploits an exact prediction",
         guard([] { return criterion_self_tuning(); }));
  report(7, "conservative run tracks the optimum under drift",
         guard([] { return criterion_conservative(); }));
  report(8, "master stays quiet on benign traffic and switches under drift",
         guard([] { return criterion_master_switching(); }));
  report(9, "every algorithm respects the budget",
         guard([] { return criterion_feasibility(); }));
  report(10, "step-size bisection honors its bracket contract",
         guard([] { return criterion_bisection(); }));
  report(11, "normalized gap stays high at every prediction accuracy",
         guard([] { return criterion_gap_profile(); }));
  report(12, "experiment reruns are byte-identical",
         guard([] { return criterion_reproducibility(); }));

  return failures;
}
