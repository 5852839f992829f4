#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ora/main_alg.hpp"
#include "ora/metrics.hpp"
#include "ora/mirror_descent.hpp"
#include "ora/types.hpp"

namespace ora {

// Where each trial's instance comes from. A file or a deterministic
// construction yields the same instance every trial; the sampled family
// reseeds per trial with base seed + trial index.
enum class InstanceSource { file, two_type, lowerbound_one, lowerbound_two };

// Two-request single-resource i.i.d. family: "hi" (reward hi_r, consumption
// hi_g) with probability hi_p, otherwise "lo" (lo_r, lo_g); budget rate rho.
struct TwoTypeFamily {
  double hi_r = 2.0;
  double lo_r = 1.0;
  double hi_g = 1.0;
  double lo_g = 1.0;
  double hi_p = 0.5;
  double rho = 0.5;
};

// How the prediction is produced for each trial.
enum class PredictionSource { inline_values, file, accuracy, canonical };

struct ExperimentConfig {
  InstanceSource source = InstanceSource::two_type;
  std::string instance_file;
  TwoTypeFamily family;
  double lb_r_bar = 4.0;       // lowerbound constructions
  double lb_alpha_star = 2.0;
  int T = 1000;

  std::string alg = "mda";  // prd | mda | sa | aa | main | clairvoyant

  PredictionSource prediction = PredictionSource::canonical;
  Vec mu_hat_values;
  std::string prediction_file;
  double accuracy_a = 0.0;  // accuracy source
  double kappa = 0.0;       // <= 0: instance kappa

  double eta = -1.0;  // mirror-descent step size; < 0 selects 1/sqrt(T)
  ReferenceFunction::Kind ref_kind = ReferenceFunction::Kind::euclidean;
  double entropy_shift = 1.0;
  MainConfig main;
  AAConfig aa;
  std::optional<OptMethod> opt_method;  // unset: exact for T <= 12, else LP
  long node_budget = 1'000'000;

  int trials = 1;
  std::uint64_t seed = 0;

  // Output plumbing shared with the CLI; empty path means stdout. T_list
  // drives the horizon-scaling study only.
  std::string out;
  std::string format = "csv";
  std::string trajectory_out;
  std::string histogram_out;
  std::string prediction_out;
  std::vector<int> T_list;
};

// Fully materialized single trial.
struct TrialSetup {
  Instance instance;
  Vec mu_hat;
};

TrialSetup build_trial(const ExperimentConfig& cfg, int trial);

// Runs cfg.alg over all trials. Master rows carry switch data. When
// first_trajectory is given it receives trial 0's step-by-step record
// (untouched for the clairvoyant baseline, which plays no online run).
std::vector<MetricsRecord> run_experiment(const ExperimentConfig& cfg,
                                          RunTrajectory* first_trajectory = nullptr);

// Runs the master plus both baselines per trial; the master rows carry the
// normalized gap (absent when the baselines coincide) and the histogram
// collects the defined gaps.
struct GapStudyResult {
  std::vector<MetricsRecord> records;
  GapHistogram histogram;
  int degenerate = 0;  // trials with coinciding baselines
};

GapStudyResult gap_study(const ExperimentConfig& cfg);

// Mean/stddev regret at each horizon plus the fitted log-log slope.
struct RegretStudyResult {
  std::vector<RegretPoint> points;
  std::optional<double> slope;
};

RegretStudyResult regret_study(ExperimentConfig cfg,
                               const std::vector<int>& T_list);

// `key = value` configuration lines; '#' comments. Recognized keys mirror
// the CLI flags (dashes and underscores interchangeable); "mu_hat" accepts
// either inline numbers or a sidecar file path, like the flag. Unknown keys
// and malformed values throw.
void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value);
void load_config_file(ExperimentConfig& cfg, const std::string& path);

}  // namespace ora
