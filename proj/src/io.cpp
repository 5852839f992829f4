#include "ora/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ora/core.hpp"

namespace ora {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw Error(ErrorCode::parse, "bad numeric token '" + tok + "'");
  return v;
}

namespace {

// Pulls whitespace-separated tokens with '#'-to-end-of-line comments removed.
struct Tokenizer {
  std::istream& in;
  std::string tok;

  explicit Tokenizer(std::istream& s) : in(s) {}

  bool next() {
    tok.clear();
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {}
        if (!tok.empty()) return true;
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) return true;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    return !tok.empty();
  }

  std::string expect(const char* what) {
    if (!next())
      throw Error(ErrorCode::parse,
                  std::string("unexpected end of input, expected ") + what);
    return tok;
  }

  double number(const char* what) { return parse_double(expect(what)); }

  int integer(const char* what) {
    double v = number(what);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw Error(ErrorCode::parse,
                  std::string("expected integer for ") + what + ", got " + tok);
    return i;
  }
};

}  // namespace

RawInstance parse_instance(std::istream& in) {
  Tokenizer tk(in);
  int m = tk.integer("resource count m");
  int T = tk.integer("horizon T");
  if (m < 1 || T < 1)
    throw Error(ErrorCode::parse, "m and T must be at least 1");
  RawInstance raw;
  raw.T = T;
  raw.rho.resize(m);
  for (int j = 0; j < m; ++j) raw.rho[j] = tk.number("budget rate");

  raw.seq.reserve(T);
  for (int t = 0; t < T; ++t) {
    int n = tk.integer("action count");
    if (n < 1)
      throw Error(ErrorCode::parse, "period " + std::to_string(t) +
                                        " must list at least the void action");
    ArrivalRequest req;
    req.actions.reserve(n);
    for (int i = 0; i < n; ++i) {
      Action a;
      a.index = i;
      a.reward = tk.number("reward");
      a.consumption.resize(m);
      for (int j = 0; j < m; ++j) a.consumption[j] = tk.number("consumption");
      req.actions.push_back(std::move(a));
    }
    raw.seq.push_back(std::move(req));
  }
  return raw;
}

RawInstance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open instance file " + path);
  return parse_instance(in);
}

Instance read_instance(std::istream& in) {
  RawInstance raw = parse_instance(in);
  auto issues = validate_instance(raw.seq, raw.rho, raw.T);
  if (!issues.empty())
    throw Error(issues.front().code, issues.front().message);
  Instance inst;
  inst.params = compute_params(raw.seq, raw.rho, raw.T);
  inst.seq = std::move(raw.seq);
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open instance file " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  const auto& p = inst.params;
  out << p.m << ' ' << p.T << '\n';
  for (int j = 0; j < p.m; ++j)
    out << format_double(p.rho[j]) << (j + 1 == p.m ? '\n' : ' ');
  for (const auto& req : inst.seq) {
    out << req.actions.size() << '\n';
    for (const auto& a : req.actions) {
      out << format_double(a.reward);
      for (double g : a.consumption) out << ' ' << format_double(g);
      out << '\n';
    }
  }
}

void write_instance_file(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::parse, "cannot write instance file " + path);
  write_instance(out, inst);
}

PredictionFile read_prediction(std::istream& in) {
  Tokenizer tk(in);
  int m = tk.integer("resource count m");
  if (m < 1) throw Error(ErrorCode::parse, "prediction m must be at least 1");
  PredictionFile p;
  p.mu_hat.resize(m);
  for (int j = 0; j < m; ++j) p.mu_hat[j] = tk.number("mu_hat value");
  p.accuracy_a = tk.number("accuracy a");
  p.kappa = tk.number("kappa");
  p.realized_distance = tk.number("realized distance");
  return p;
}

PredictionFile read_prediction_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open prediction file " + path);
  return read_prediction(in);
}

void write_prediction(std::ostream& out, const PredictionFile& pred) {
  out << pred.mu_hat.size() << '\n';
  for (std::size_t j = 0; j < pred.mu_hat.size(); ++j)
    out << format_double(pred.mu_hat[j])
        << (j + 1 == pred.mu_hat.size() ? '\n' : ' ');
  out << format_double(pred.accuracy_a) << ' ' << format_double(pred.kappa)
      << ' ' << format_double(pred.realized_distance) << '\n';
}

void write_prediction_file(const std::string& path, const PredictionFile& pred) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::parse, "cannot write prediction file " + path);
  write_prediction(out, pred);
}

void write_trajectory_csv(std::ostream& out, const RunTrajectory& traj, int m) {
  out << "t,action,reward";
  for (int j = 1; j <= m; ++j) out << ",g_" << j;
  for (int j = 1; j <= m; ++j) out << ",mu_" << j;
  for (int j = 1; j <= m; ++j) out << ",G_" << j;
  out << ",eta_t\n";
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const auto& s = traj.steps[t];
    out << (t + 1) << ',' << s.action_index << ',' << format_double(s.reward);
    for (int j = 0; j < m; ++j) out << ',' << format_double(s.consumption[j]);
    for (int j = 0; j < m; ++j) out << ',' << format_double(s.mu[j]);
    for (int j = 0; j < m; ++j) out << ',' << format_double(s.remaining[j]);
    out << ',' << format_double(s.eta) << '\n';
  }
}

}  // namespace ora
