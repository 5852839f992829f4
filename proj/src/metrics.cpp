#include "ora/metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ora/io.hpp"

namespace ora {

double gap_metric(double r_main, double r_prd, double r_mda) {
  if (r_prd == r_mda)
    throw Error(ErrorCode::degenerate_baselines,
                "baseline rewards coincide; the normalized gap is undefined");
  double lo = std::min(r_prd, r_mda);
  double hi = std::max(r_prd, r_mda);
  return (r_main - lo) / (hi - lo);
}

static const char kHeader[] =
    "trial,T,alg,opt,opt_method,reward,regret,comp_shortfall,gap,switched,"
    "switch_time,runtime_ms";

void emit_report(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << kHeader << '\n';
  for (const auto& r : records) {
    out << r.trial << ',' << r.T << ',' << r.alg << ',' << format_double(r.opt)
        << ',' << r.opt_method << ',' << format_double(r.reward) << ','
        << format_double(r.regret) << ',' << format_double(r.comp_shortfall)
        << ',';
    if (r.gap) out << format_double(*r.gap);
    out << ',';
    if (r.switched) out << (*r.switched ? 1 : 0);
    out << ',';
    if (r.switch_time) out << *r.switch_time;
    out << ',' << format_double(r.runtime_ms) << '\n';
  }
}

std::vector<MetricsRecord> parse_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw Error(ErrorCode::parse, "bad report header");
  std::vector<MetricsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    f.push_back(cur);
    if (f.size() != 12)
      throw Error(ErrorCode::parse, "bad report row: " + line);
    MetricsRecord r;
    r.trial = static_cast<int>(parse_double(f[0]));
    r.T = static_cast<int>(parse_double(f[1]));
    r.alg = f[2];
    r.opt = parse_double(f[3]);
    r.opt_method = f[4];
    r.reward = parse_double(f[5]);
    r.regret = parse_double(f[6]);
    r.comp_shortfall = parse_double(f[7]);
    if (!f[8].empty()) r.gap = parse_double(f[8]);
    if (!f[9].empty()) r.switched = f[9] == "1";
    if (!f[10].empty()) r.switch_time = static_cast<int>(parse_double(f[10]));
    r.runtime_ms = parse_double(f[11]);
    out.push_back(std::move(r));
  }
  return out;
}

const std::array<const char*, 12>& GapHistogram::labels() {
  static const std::array<const char*, 12> kLabels = {
      "lt_0",    "0.0-0.1", "0.1-0.2", "0.2-0.3", "0.3-0.4", "0.4-0.5",
      "0.5-0.6", "0.6-0.7", "0.7-0.8", "0.8-0.9", "0.9-1.0", "gt_1"};
  return kLabels;
}

void GapHistogram::add(double gap) {
  if (gap < 0.0) {
    ++counts[0];
  } else if (gap > 1.0) {
    ++counts[11];
  } else {
    int bin = static_cast<int>(gap * 10.0);
    if (bin > 9) bin = 9;  // 1.0 belongs to the top covered bin
    ++counts[1 + bin];
  }
}

long GapHistogram::total() const {
  long t = 0;
  for (long c : counts) t += c;
  return t;
}

void emit_histogram(std::ostream& out, const GapHistogram& hist) {
  out << "bin,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    out << GapHistogram::labels()[i] << ',' << hist.counts[i] << '\n';
}

std::optional<double> regret_slope(const std::vector<RegretPoint>& points) {
  if (points.size() < 2) return std::nullopt;
  for (const auto& p : points)
    if (!(p.mean > 0.0)) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    double x = std::log(static_cast<double>(p.T));
    double y = std::log(p.mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace ora
