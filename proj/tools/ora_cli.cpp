#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <utility>
#include <vector>

#include "ora/core.hpp"
#include "ora/experiment.hpp"
#include "ora/generators.hpp"
#include "ora/io.hpp"
#include "ora/metrics.hpp"
#include "ora/offline.hpp"
#include "ora/types.hpp"

namespace {

int exit_code_for(ora::ErrorCode code) {
  using ora::ErrorCode;
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::nonpositive_step_size:
    case ErrorCode::invalid_bracket:
    case ErrorCode::bad_weights:
    case ErrorCode::parameter_violation:
    case ErrorCode::horizon_too_small:
    case ErrorCode::block_too_small:
    case ErrorCode::degenerate_baselines:
      return 2;
    case ErrorCode::parse:
    case ErrorCode::missing_void_action:
    case ErrorCode::reward_exceeds_bound:
    case ErrorCode::consumption_out_of_range:
    case ErrorCode::nonpositive_budget:
    case ErrorCode::length_mismatch:
    case ErrorCode::infeasible_action:
      return 3;
    case ErrorCode::node_budget_exceeded:
    case ErrorCode::grid_too_coarse:
      return 4;
    case ErrorCode::internal:
      return 1;
  }
  return 1;
}

void with_output(const std::string& path,
                 const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw ora::Error(ora::ErrorCode::config, "cannot open output file " + path);
  }
  fn(out);
}

// Flags are recorded in command-line order and replayed through the config
// grammar after the config file, so later flags override earlier ones and a
// flag always overrides the file.
struct Options {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> kv;

  ora::ExperimentConfig build() const {
    ora::ExperimentConfig cfg;
    if (!config_path.empty()) ora::load_config_file(cfg, config_path);
    for (const auto& [key, value] : kv) ora::apply_config_line(cfg, key, value);
    return cfg;
  }
};

void add_common_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path,
                  "key = value configuration file, applied before flags");
  auto kv = [cmd, &opt](const std::string& flag, std::string key,
                        const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&opt, key = std::move(key)](const std::string& v) {
          opt.kv.emplace_back(key, v);
        },
        help);
  };
  auto onoff = [cmd, &opt](const std::string& flag, std::string key,
                           const std::string& help) {
    cmd->add_flag_function(
        flag,
        [&opt, key = std::move(key)](std::int64_t) {
          opt.kv.emplace_back(key, "1");
        },
        help);
  };

  kv("--instance", "instance", "instance file (text format)");
  kv("--family", "family",
     "generated family: twotype | lowerbound-one | lowerbound-two");
  kv("--hi-r", "hi_r", "twotype: high-type reward");
  kv("--lo-r", "lo_r", "twotype: low-type reward");
  kv("--hi-g", "hi_g", "twotype: high-type consumption");
  kv("--lo-g", "lo_g", "twotype: low-type consumption");
  kv("--hi-p", "hi_p", "twotype: high-type probability");
  kv("--rho", "rho", "twotype: per-period budget rate");
  kv("--lb-r-bar", "lb_r_bar", "lowerbound: heavy reward");
  kv("--lb-alpha-star", "lb_alpha_star", "lowerbound: heavy consumption");
  kv("-T,--horizon", "T", "horizon length");
  kv("--alg", "alg", "prd | mda | sa | aa | main | clairvoyant");
  kv("--mu-hat", "mu_hat",
     "prediction: inline numbers (comma separated) or a sidecar file path");
  kv("--accuracy-a", "accuracy_a",
     "synthesize the prediction at this accuracy level (inf = exact)");
  kv("--kappa", "kappa", "accuracy scale for synthesized predictions");
  kv("--eta", "eta", "mirror-descent step size (default 1/sqrt(T))");
  kv("--eta-1", "eta_1", "self-tuning initial step size (default 1/T)");
  kv("--k-cap", "k_cap", "self-tuning doubling-schedule cap");
  onoff("--first-finite", "first_finite",
        "self-tuning: keep the first finite probe instead of the last");
  kv("--delta", "delta", "master loop: block fraction");
  kv("--L", "L", "master loop: test sensitivity (default derived)");
  onoff("--literal-pseudocode", "literal_pseudocode",
        "master loop: keep blocks on a large gap instead of switching");
  kv("--epsilon-fn", "epsilon_fn", "conservative factor: invlog | power");
  kv("--epsilon-exponent", "epsilon_exponent",
     "conservative factor: exponent for power");
  kv("--c", "c", "conservative step-size scale");
  kv("--ref-fn", "ref_fn", "reference function: euclidean | entropy");
  kv("--shift", "shift", "entropy reference shift");
  kv("--opt-method", "opt_method",
     "offline benchmark: exact | lp (default: exact for T <= 12)");
  kv("--node-budget", "node_budget", "offline solver node budget");
  kv("--trials", "trials", "number of trials");
  kv("--seed", "seed", "base seed; trial i uses seed + i");
  kv("--out", "out", "output file (default stdout)");
  kv("--format", "format", "output format: csv");
}

void run_command(const Options& opt, const std::string& trajectory_flag) {
  ora::ExperimentConfig cfg = opt.build();
  if (!trajectory_flag.empty()) cfg.trajectory_out = trajectory_flag;
  ora::RunTrajectory trajectory;
  bool want_traj = !cfg.trajectory_out.empty();
  std::vector<ora::MetricsRecord> records =
      ora::run_experiment(cfg, want_traj ? &trajectory : nullptr);
  with_output(cfg.out, [&](std::ostream& os) { ora::emit_report(os, records); });
  if (want_traj) {
    if (trajectory.initial_budget.empty()) {
      throw ora::Error(ora::ErrorCode::config,
                       "no step-by-step trajectory exists for this algorithm");
    }
    std::ofstream out(cfg.trajectory_out);
    if (!out) {
      throw ora::Error(ora::ErrorCode::config, "cannot open output file " +
                                                   cfg.trajectory_out);
    }
    ora::write_trajectory_csv(out, trajectory,
                              static_cast<int>(trajectory.initial_budget.size()));
  }
}

void regret_command(const Options& opt) {
  ora::ExperimentConfig cfg = opt.build();
  if (cfg.T_list.empty()) {
    throw ora::Error(ora::ErrorCode::config,
                     "the scaling study needs --T-list with at least one horizon");
  }
  for (std::size_t i = 1; i < cfg.T_list.size(); ++i) {
    if (cfg.T_list[i] <= cfg.T_list[i - 1]) {
      throw ora::Error(ora::ErrorCode::config,
                       "--T-list must be strictly ascending");
    }
  }
  ora::RegretStudyResult res = ora::regret_study(cfg, cfg.T_list);
  with_output(cfg.out, [&](std::ostream& os) {
    os << "T,mean_regret,stddev_regret\n";
    for (const ora::RegretPoint& p : res.points) {
      os << p.T << ',' << ora::format_double(p.mean) << ','
         << ora::format_double(p.stddev) << '\n';
    }
    os << "# log-log slope: "
       << (res.slope ? ora::format_double(*res.slope) : "undefined") << '\n';
  });
}

void gap_study_command(const Options& opt) {
  ora::ExperimentConfig cfg = opt.build();
  ora::GapStudyResult res = ora::gap_study(cfg);
  with_output(cfg.out, [&](std::ostream& os) {
    ora::emit_report(os, res.records);
  });
  if (!cfg.histogram_out.empty()) {
    std::ofstream out(cfg.histogram_out);
    if (!out) {
      throw ora::Error(ora::ErrorCode::config,
                       "cannot open output file " + cfg.histogram_out);
    }
    ora::emit_histogram(out, res.histogram);
  }
  double sum = 0.0;
  long defined = 0;
  for (const ora::MetricsRecord& rec : res.records) {
    if (rec.gap) {
      sum += *rec.gap;
      ++defined;
    }
  }
  std::cerr << "gap-study: " << defined << " defined gaps";
  if (defined > 0) std::cerr << ", mean " << ora::format_double(sum / defined);
  if (res.degenerate > 0) {
    std::cerr << ", " << res.degenerate << " degenerate (baselines coincide)";
  }
  std::cerr << '\n';
}

void gen_command(const Options& opt) {
  ora::ExperimentConfig cfg = opt.build();
  ora::TrialSetup setup = ora::build_trial(cfg, 0);
  const ora::Instance& inst = setup.instance;
  with_output(cfg.out, [&](std::ostream& os) { ora::write_instance(os, inst); });
  if (cfg.prediction_out.empty()) return;

  // Sidecar metadata measures the prediction against the grid-found best
  // fixed dual, whatever source produced it.
  auto [mu_star, follow_reward] =
      ora::find_perfect_dual(inst.seq, inst.params, -1.0);
  (void)follow_reward;
  ora::PredictionFile pf;
  pf.mu_hat = setup.mu_hat;
  pf.kappa = cfg.kappa > 0 ? cfg.kappa : inst.params.kappa;
  pf.realized_distance = ora::norm1_diff(setup.mu_hat, mu_star);
  pf.accuracy_a =
      pf.realized_distance > 0.0
          ? -std::log(pf.realized_distance / pf.kappa) /
                std::log(static_cast<double>(inst.params.T))
          : std::numeric_limits<double>::infinity();
  ora::write_prediction_file(cfg.prediction_out, pf);
}

void validate_command(const std::string& path) {
  ora::RawInstance raw = ora::parse_instance_file(path);
  std::vector<ora::ValidationIssue> issues =
      ora::validate_instance(raw.seq, raw.rho, raw.T);
  if (issues.empty()) {
    ora::ProblemParams p = ora::compute_params(raw.seq, raw.rho, raw.T);
    std::cout << "ok: m=" << p.m << " T=" << p.T
              << " r_bar=" << ora::format_double(p.r_bar)
              << " g_bar=" << ora::format_double(p.g_bar)
              << " alpha_star=" << ora::format_double(p.alpha_star)
              << " kappa=" << ora::format_double(p.kappa) << '\n';
    return;
  }
  for (const ora::ValidationIssue& issue : issues) {
    std::cout << "issue: " << issue.message << '\n';
  }
  throw ora::Error(issues.front().code,
                   std::to_string(issues.size()) + " validation issue(s)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Online resource allocation with dual-variable predictions: "
      "experiment runner"};
  app.require_subcommand(1);

  Options run_opt;
  std::string run_traj_out;
  CLI::App* run = app.add_subcommand(
      "run", "run one algorithm over trials and report metrics");
  add_common_options(run, run_opt);
  run->add_option("--trajectory-out", run_traj_out,
                  "write trial 0's step-by-step trajectory CSV here");

  Options regret_opt;
  CLI::App* regret = app.add_subcommand(
      "regret", "mean regret across horizons plus the log-log slope");
  add_common_options(regret, regret_opt);
  regret->add_option_function<std::string>(
      "--T-list",
      [&regret_opt](const std::string& v) {
        regret_opt.kv.emplace_back("T_list", v);
      },
      "comma-separated ascending horizons");

  Options gap_opt;
  CLI::App* gap = app.add_subcommand(
      "gap-study",
      "master loop vs both baselines; normalized gap per trial");
  add_common_options(gap, gap_opt);
  gap->add_option_function<std::string>(
      "--histogram-out",
      [&gap_opt](const std::string& v) {
        gap_opt.kv.emplace_back("histogram_out", v);
      },
      "write the gap histogram bins CSV here");

  Options gen_opt;
  CLI::App* gen = app.add_subcommand(
      "gen", "write a generated instance (and optional prediction sidecar)");
  add_common_options(gen, gen_opt);
  gen->add_option_function<std::string>(
      "--prediction-out",
      [&gen_opt](const std::string& v) {
        gen_opt.kv.emplace_back("prediction_out", v);
      },
      "write the prediction sidecar here");

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate", "check an instance file and print issues");
  validate->add_option("--instance", validate_path, "instance file to check")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) run_command(run_opt, run_traj_out);
    if (regret->parsed()) regret_command(regret_opt);
    if (gap->parsed()) gap_study_command(gap_opt);
    if (gen->parsed()) gen_command(gen_opt);
    if (validate->parsed()) validate_command(validate_path);
  } catch (const ora::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
