#pragma once

#include <iosfwd>
#include <string>

#include "ora/trajectory.hpp"
#include "ora/types.hpp"

namespace ora {

// Shortest decimal form that parses back to the same double ("inf" for
// infinities). All file emitters use this so reruns are byte-identical.
std::string format_double(double x);
double parse_double(const std::string& tok);

// Instance text format. Space-separated ASCII, '#' starts a comment:
//   m T
//   rho_1 ... rho_m
//   then per period: a line "n_actions" followed by n_actions lines
//   "reward g_1 ... g_m", the first of which must be the void action
//   "0 0 ... 0". Action indices follow listing order.
// Parsed but not yet validated, so callers can collect every issue instead
// of stopping at the first.
struct RawInstance {
  ArrivalSequence seq;
  Vec rho;
  int T = 0;
};

RawInstance parse_instance(std::istream& in);
RawInstance parse_instance_file(const std::string& path);

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& inst);
void write_instance_file(const std::string& path, const Instance& inst);

// Prediction sidecar:
//   line 1: m
//   line 2: mu_hat values
//   line 3: accuracy_a kappa realized_distance   (accuracy may be "inf")
struct PredictionFile {
  Vec mu_hat;
  double accuracy_a = 0.0;
  double kappa = 0.0;
  double realized_distance = 0.0;
};

PredictionFile read_prediction(std::istream& in);
PredictionFile read_prediction_file(const std::string& path);
void write_prediction(std::ostream& out, const PredictionFile& pred);
void write_prediction_file(const std::string& path, const PredictionFile& pred);

// Trajectory dump: header t,action,reward,g_1..g_m,mu_1..mu_m,G_1..G_m,eta_t
void write_trajectory_csv(std::ostream& out, const RunTrajectory& traj, int m);

}  // namespace ora
