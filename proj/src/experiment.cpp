#include "ora/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ora/core.hpp"
#include "ora/generators.hpp"
#include "ora/io.hpp"
#include "ora/offline.hpp"

namespace ora {
namespace {

OptMethod pick_opt_method(const std::optional<OptMethod>& wanted, int T) {
  if (wanted) return *wanted;
  return T <= 12 ? OptMethod::exact : OptMethod::lp_relaxation;
}

const char* opt_method_name(OptMethod m) {
  return m == OptMethod::exact ? "exact" : "lp";
}

ReferenceFunction make_reference(const ExperimentConfig& cfg,
                                 const ProblemParams& params) {
  if (cfg.ref_kind == ReferenceFunction::Kind::euclidean) {
    return ReferenceFunction::euclidean(params.m);
  }
  return ReferenceFunction::shifted_entropy(params, cfg.entropy_shift);
}

Vec full_budget(const ProblemParams& params) {
  Vec b = params.rho;
  for (double& v : b) v *= params.T;
  return b;
}

ArrivalRequest single_action_request(int m, double reward, double g,
                                     std::string label) {
  ArrivalRequest req;
  req.label = std::move(label);
  req.actions.push_back(Action{0, 0.0, Vec(static_cast<std::size_t>(m), 0.0)});
  req.actions.push_back(Action{1, reward, Vec(static_cast<std::size_t>(m), g)});
  return req;
}

struct AlgOutcome {
  RunTrajectory trajectory;
  std::optional<SwitchRecord> switch_record;
};

AlgOutcome dispatch(const ExperimentConfig& cfg, const TrialSetup& setup) {
  const Instance& inst = setup.instance;
  AlgOutcome out;
  if (cfg.alg == "prd") {
    out.trajectory = run_prd(inst, setup.mu_hat);
  } else if (cfg.alg == "mda") {
    ReferenceFunction h = make_reference(cfg, inst.params);
    double eta = cfg.eta < 0.0 ? 1.0 / std::sqrt(static_cast<double>(inst.params.T))
                               : cfg.eta;
    out.trajectory = run_mda(inst, setup.mu_hat, eta, h);
  } else if (cfg.alg == "sa") {
    ReferenceFunction h = make_reference(cfg, inst.params);
    out.trajectory = run_sa(inst, setup.mu_hat, h, cfg.main.tuner);
  } else if (cfg.alg == "aa") {
    ReferenceFunction h = make_reference(cfg, inst.params);
    out.trajectory = run_aa(inst, setup.mu_hat, h, cfg.aa);
  } else if (cfg.alg == "main") {
    ReferenceFunction h = make_reference(cfg, inst.params);
    MainConfig mc = cfg.main;
    mc.aa = cfg.aa;
    mc.opt_method = cfg.opt_method;
    mc.node_budget = cfg.node_budget;
    MainResult r = run_main(inst, setup.mu_hat, h, mc);
    out.trajectory = std::move(r.trajectory);
    out.switch_record = r.switch_record;
  } else {
    throw Error(ErrorCode::config, "unknown algorithm '" + cfg.alg + "'");
  }
  return out;
}

std::string trimmed(std::string s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) {
    s.erase(s.begin());
  }
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) {
    s.pop_back();
  }
  return s;
}

int parse_int(const std::string& tok) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw Error(ErrorCode::parse, "expected an integer, got '" + tok + "'");
  }
  return v;
}

long parse_long(const std::string& tok) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw Error(ErrorCode::parse, "expected an integer, got '" + tok + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& tok) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw Error(ErrorCode::parse, "expected a nonnegative integer, got '" + tok + "'");
  }
  return v;
}

bool parse_bool(const std::string& tok) {
  if (tok == "1" || tok == "true" || tok == "yes" || tok == "on") return true;
  if (tok == "0" || tok == "false" || tok == "no" || tok == "off") return false;
  throw Error(ErrorCode::parse, "expected a boolean, got '" + tok + "'");
}

Vec parse_vector(const std::string& value) {
  std::string spaced = value;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  Vec out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok));
  if (out.empty()) {
    throw Error(ErrorCode::parse, "expected at least one number, got '" + value + "'");
  }
  return out;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

TrialSetup build_trial(const ExperimentConfig& cfg, int trial) {
  TrialSetup setup;
  Vec canonical_mu_hat;
  bool have_canonical = false;

  switch (cfg.source) {
    case InstanceSource::file:
      setup.instance = read_instance_file(cfg.instance_file);
      break;
    case InstanceSource::two_type: {
      const TwoTypeFamily& f = cfg.family;
      DistributionSpec spec;
      spec.support.push_back(single_action_request(1, f.hi_r, f.hi_g, "hi"));
      spec.support.push_back(single_action_request(1, f.lo_r, f.lo_g, "lo"));
      spec.weights = {f.hi_p, 1.0 - f.hi_p};
      spec.seed = cfg.seed + static_cast<std::uint64_t>(trial);
      setup.instance = gen_stochastic(spec, Vec{f.rho}, cfg.T);
      break;
    }
    case InstanceSource::lowerbound_one:
    case InstanceSource::lowerbound_two: {
      LowerBoundVariant v = cfg.source == InstanceSource::lowerbound_one
                                ? LowerBoundVariant::one
                                : LowerBoundVariant::two;
      LowerBoundInstance lb =
          gen_lowerbound(cfg.T, cfg.lb_r_bar, cfg.lb_alpha_star, v);
      setup.instance = std::move(lb.instance);
      canonical_mu_hat = std::move(lb.mu_hat);
      have_canonical = true;
      break;
    }
  }

  const ProblemParams& params = setup.instance.params;
  switch (cfg.prediction) {
    case PredictionSource::inline_values: {
      if (static_cast<int>(cfg.mu_hat_values.size()) != params.m) {
        throw Error(ErrorCode::length_mismatch,
                    "prediction has " + std::to_string(cfg.mu_hat_values.size()) +
                        " coordinates for " + std::to_string(params.m) +
                        " resources");
      }
      for (double v : cfg.mu_hat_values) {
        if (!(v >= 0.0)) {
          throw Error(ErrorCode::config, "prediction coordinates must be >= 0");
        }
      }
      setup.mu_hat = cfg.mu_hat_values;
      break;
    }
    case PredictionSource::file: {
      PredictionFile pf = read_prediction_file(cfg.prediction_file);
      if (static_cast<int>(pf.mu_hat.size()) != params.m) {
        throw Error(ErrorCode::length_mismatch,
                    "prediction file has " + std::to_string(pf.mu_hat.size()) +
                        " coordinates for " + std::to_string(params.m) +
                        " resources");
      }
      setup.mu_hat = std::move(pf.mu_hat);
      break;
    }
    case PredictionSource::accuracy: {
      PredictionSpec spec;
      spec.accuracy_a = cfg.accuracy_a;
      spec.kappa = cfg.kappa;
      spec.direction_seed = cfg.seed + static_cast<std::uint64_t>(trial);
      setup.mu_hat = make_prediction(setup.instance, spec).mu_hat;
      break;
    }
    case PredictionSource::canonical: {
      if (have_canonical) {
        setup.mu_hat = std::move(canonical_mu_hat);
      } else {
        PredictionSpec spec;
        spec.accuracy_a = std::numeric_limits<double>::infinity();
        setup.mu_hat = make_prediction(setup.instance, spec).mu_hat;
      }
      break;
    }
  }
  return setup;
}

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& cfg,
                                          RunTrajectory* first_trajectory) {
  using clock = std::chrono::steady_clock;
  std::vector<MetricsRecord> out;
  out.reserve(static_cast<std::size_t>(std::max(cfg.trials, 0)));
  for (int trial = 0; trial < cfg.trials; ++trial) {
    TrialSetup setup = build_trial(cfg, trial);
    const ProblemParams& params = setup.instance.params;
    OptMethod method = pick_opt_method(cfg.opt_method, params.T);

    MetricsRecord rec;
    rec.trial = trial;
    rec.T = params.T;
    rec.alg = cfg.alg;
    rec.opt_method = opt_method_name(method);

    if (cfg.alg == "clairvoyant") {
      auto t0 = clock::now();
      OfflineSolution sol = solve_opt(setup.instance.seq, full_budget(params),
                                      method, cfg.node_budget);
      rec.runtime_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      rec.opt = sol.value;
      rec.reward = sol.value;
    } else {
      auto t0 = clock::now();
      AlgOutcome run = dispatch(cfg, setup);
      rec.runtime_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      OfflineSolution sol = solve_opt(setup.instance.seq, full_budget(params),
                                      method, cfg.node_budget);
      rec.opt = sol.value;
      rec.reward = run.trajectory.total_reward;
      if (run.switch_record) {
        rec.switched = run.switch_record->switched;
        if (run.switch_record->switched) {
          rec.switch_time = run.switch_record->switch_time;
        }
      }
      if (trial == 0 && first_trajectory != nullptr) {
        *first_trajectory = std::move(run.trajectory);
      }
    }
    rec.regret = rec.opt - rec.reward;
    rec.comp_shortfall = rec.opt / params.alpha_star - rec.reward;
    out.push_back(std::move(rec));
  }
  return out;
}

GapStudyResult gap_study(const ExperimentConfig& cfg) {
  using clock = std::chrono::steady_clock;
  GapStudyResult result;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    ExperimentConfig base = cfg;
    base.alg = "main";
    TrialSetup setup = build_trial(base, trial);
    const ProblemParams& params = setup.instance.params;
    OptMethod method = pick_opt_method(cfg.opt_method, params.T);
    OfflineSolution sol = solve_opt(setup.instance.seq, full_budget(params),
                                    method, cfg.node_budget);

    auto record_for = [&](const std::string& alg, const RunTrajectory& traj,
                          double runtime_ms) {
      MetricsRecord rec;
      rec.trial = trial;
      rec.T = params.T;
      rec.alg = alg;
      rec.opt = sol.value;
      rec.opt_method = opt_method_name(method);
      rec.reward = traj.total_reward;
      rec.regret = rec.opt - rec.reward;
      rec.comp_shortfall = rec.opt / params.alpha_star - rec.reward;
      rec.runtime_ms = runtime_ms;
      return rec;
    };

    ReferenceFunction h = make_reference(cfg, params);
    MainConfig mc = cfg.main;
    mc.aa = cfg.aa;
    mc.opt_method = cfg.opt_method;
    mc.node_budget = cfg.node_budget;

    auto t0 = clock::now();
    MainResult main_run = run_main(setup.instance, setup.mu_hat, h, mc);
    double main_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    t0 = clock::now();
    RunTrajectory prd_run = run_prd(setup.instance, setup.mu_hat);
    double prd_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    double eta = cfg.eta < 0.0 ? 1.0 / std::sqrt(static_cast<double>(params.T))
                               : cfg.eta;
    t0 = clock::now();
    RunTrajectory mda_run = run_mda(setup.instance, setup.mu_hat, eta, h);
    double mda_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    MetricsRecord main_rec = record_for("main", main_run.trajectory, main_ms);
    main_rec.switched = main_run.switch_record.switched;
    if (main_run.switch_record.switched) {
      main_rec.switch_time = main_run.switch_record.switch_time;
    }
    if (prd_run.total_reward == mda_run.total_reward) {
      ++result.degenerate;
    } else {
      double g = gap_metric(main_run.trajectory.total_reward,
                            prd_run.total_reward, mda_run.total_reward);
      main_rec.gap = g;
      result.histogram.add(g);
    }

    result.records.push_back(std::move(main_rec));
    result.records.push_back(record_for("prd", prd_run, prd_ms));
    result.records.push_back(record_for("mda", mda_run, mda_ms));
  }
  return result;
}

RegretStudyResult regret_study(ExperimentConfig cfg,
                               const std::vector<int>& T_list) {
  RegretStudyResult result;
  for (int T : T_list) {
    cfg.T = T;
    std::vector<MetricsRecord> records = run_experiment(cfg);
    std::vector<double> regrets;
    regrets.reserve(records.size());
    for (const MetricsRecord& rec : records) regrets.push_back(rec.regret);
    RegretPoint point;
    point.T = T;
    point.mean = mean_of(regrets);
    point.stddev = sample_stddev(regrets, point.mean);
    result.points.push_back(point);
  }
  result.slope = regret_slope(result.points);
  return result;
}

void apply_config_line(ExperimentConfig& cfg, const std::string& raw_key,
                       const std::string& raw_value) {
  std::string key = trimmed(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trimmed(raw_value);
  if (key.empty()) throw Error(ErrorCode::config, "empty configuration key");
  if (value.empty()) {
    throw Error(ErrorCode::config, "empty value for key '" + key + "'");
  }

  if (key == "instance") {
    cfg.source = InstanceSource::file;
    cfg.instance_file = value;
  } else if (key == "family") {
    if (value == "twotype" || value == "two-type") {
      cfg.source = InstanceSource::two_type;
    } else if (value == "lowerbound-one" || value == "lb1") {
      cfg.source = InstanceSource::lowerbound_one;
    } else if (value == "lowerbound-two" || value == "lb2") {
      cfg.source = InstanceSource::lowerbound_two;
    } else {
      throw Error(ErrorCode::config, "unknown family '" + value + "'");
    }
  } else if (key == "hi_r") {
    cfg.family.hi_r = parse_double(value);
  } else if (key == "lo_r") {
    cfg.family.lo_r = parse_double(value);
  } else if (key == "hi_g") {
    cfg.family.hi_g = parse_double(value);
  } else if (key == "lo_g") {
    cfg.family.lo_g = parse_double(value);
  } else if (key == "hi_p") {
    cfg.family.hi_p = parse_double(value);
  } else if (key == "rho") {
    cfg.family.rho = parse_double(value);
  } else if (key == "lb_r_bar") {
    cfg.lb_r_bar = parse_double(value);
  } else if (key == "lb_alpha_star") {
    cfg.lb_alpha_star = parse_double(value);
  } else if (key == "T") {
    cfg.T = parse_int(value);
  } else if (key == "alg") {
    cfg.alg = value;
  } else if (key == "mu_hat") {
    // Inline numbers when the whole value parses as such, else a sidecar path.
    try {
      Vec parsed = parse_vector(value);
      cfg.prediction = PredictionSource::inline_values;
      cfg.mu_hat_values = std::move(parsed);
    } catch (const Error&) {
      cfg.prediction = PredictionSource::file;
      cfg.prediction_file = value;
    }
  } else if (key == "prediction_file") {
    cfg.prediction = PredictionSource::file;
    cfg.prediction_file = value;
  } else if (key == "accuracy_a") {
    cfg.prediction = PredictionSource::accuracy;
    cfg.accuracy_a = parse_double(value);
  } else if (key == "prediction") {
    if (value != "canonical") {
      throw Error(ErrorCode::config,
                  "key 'prediction' only accepts 'canonical'");
    }
    cfg.prediction = PredictionSource::canonical;
  } else if (key == "kappa") {
    cfg.kappa = parse_double(value);
  } else if (key == "eta") {
    cfg.eta = parse_double(value);
  } else if (key == "eta_1") {
    cfg.main.tuner.eta_1 = parse_double(value);
  } else if (key == "k_cap") {
    cfg.main.tuner.k_cap = parse_int(value);
  } else if (key == "first_finite") {
    cfg.main.tuner.first_finite = parse_bool(value);
  } else if (key == "delta") {
    cfg.main.delta = parse_double(value);
  } else if (key == "L") {
    cfg.main.L = parse_double(value);
  } else if (key == "literal_pseudocode") {
    cfg.main.literal_pseudocode = parse_bool(value);
  } else if (key == "epsilon_fn") {
    if (value == "invlog" || value == "inv-log") {
      cfg.aa.epsilon.kind = EpsilonFn::Kind::inv_log;
    } else if (value == "power") {
      cfg.aa.epsilon.kind = EpsilonFn::Kind::power;
    } else {
      throw Error(ErrorCode::config, "unknown epsilon_fn '" + value + "'");
    }
  } else if (key == "epsilon_exponent") {
    cfg.aa.epsilon.exponent = parse_double(value);
  } else if (key == "c") {
    cfg.aa.c = parse_double(value);
  } else if (key == "ref_fn") {
    if (value == "euclidean") {
      cfg.ref_kind = ReferenceFunction::Kind::euclidean;
    } else if (value == "entropy" || value == "shifted-entropy") {
      cfg.ref_kind = ReferenceFunction::Kind::shifted_entropy;
    } else {
      throw Error(ErrorCode::config, "unknown ref_fn '" + value + "'");
    }
  } else if (key == "shift") {
    cfg.entropy_shift = parse_double(value);
  } else if (key == "opt_method") {
    if (value == "exact") {
      cfg.opt_method = OptMethod::exact;
    } else if (value == "lp") {
      cfg.opt_method = OptMethod::lp_relaxation;
    } else {
      throw Error(ErrorCode::config, "unknown opt_method '" + value + "'");
    }
  } else if (key == "node_budget") {
    cfg.node_budget = parse_long(value);
  } else if (key == "trials") {
    cfg.trials = parse_int(value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    if (value != "csv") {
      throw Error(ErrorCode::config, "unsupported format '" + value + "'");
    }
    cfg.format = value;
  } else if (key == "trajectory_out") {
    cfg.trajectory_out = value;
  } else if (key == "histogram_out") {
    cfg.histogram_out = value;
  } else if (key == "prediction_out") {
    cfg.prediction_out = value;
  } else if (key == "T_list") {
    std::string spaced = value;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<int> ts;
    std::string tok;
    while (in >> tok) ts.push_back(parse_int(tok));
    if (ts.empty()) {
      throw Error(ErrorCode::parse, "T_list needs at least one horizon");
    }
    cfg.T_list = std::move(ts);
  } else {
    throw Error(ErrorCode::config, "unknown configuration key '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::string body = trimmed(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
    }
    apply_config_line(cfg, body.substr(0, eq), body.substr(eq + 1));
  }
}

}  // namespace ora
