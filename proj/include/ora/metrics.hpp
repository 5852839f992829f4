#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ora/types.hpp"

namespace ora {

// One result row. Optional fields stay empty in the CSV when not applicable
// (gap for non-master algorithms, switch data for everything else).
struct MetricsRecord {
  int trial = 0;
  int T = 0;
  std::string alg;
  double opt = 0.0;
  std::string opt_method;  // "exact" or "lp"
  double reward = 0.0;
  double regret = 0.0;          // opt - reward
  double comp_shortfall = 0.0;  // opt / alpha_star - reward
  std::optional<double> gap;
  std::optional<bool> switched;
  std::optional<int> switch_time;
  double runtime_ms = 0.0;
};

// Normalized position of the master run between the worse and better of the
// two baselines: (r_main - min) / (max - min). Identical baselines make the
// ratio meaningless; that is reported as degenerate_baselines, not as zero.
double gap_metric(double r_main, double r_prd, double r_mda);

// CSV with a fixed header; doubles in shortest round-trip form so reruns are
// byte-identical apart from the runtime column.
void emit_report(std::ostream& out, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> parse_report(std::istream& in);

// Gap histogram: one underflow bin (< 0), ten width-0.1 bins covering
// [0, 1] with 1.0 landing in the top bin, one overflow bin (> 1).
struct GapHistogram {
  std::array<long, 12> counts{};
  static const std::array<const char*, 12>& labels();
  void add(double gap);
  long total() const;
};

void emit_histogram(std::ostream& out, const GapHistogram& hist);

// Least-squares slope of ln(mean regret) against ln(T); empty when any mean
// is nonpositive (a clairvoyant baseline has exactly zero regret at every T,
// which leaves the log-log fit undefined).
struct RegretPoint {
  int T = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

std::optional<double> regret_slope(const std::vector<RegretPoint>& points);

}  // namespace ora
