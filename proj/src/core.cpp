#include "ora/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ora {

ProblemParams compute_params(const ArrivalSequence& seq, const Vec& rho, int T) {
  ProblemParams p;
  p.m = static_cast<int>(rho.size());
  p.T = T;
  p.rho = rho;
  p.rho_under = rho.empty() ? 0.0 : *std::min_element(rho.begin(), rho.end());
  p.rho_bar = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());

  bool any_nonvoid = false;
  for (const auto& req : seq) {
    for (const auto& a : req.actions) {
      p.r_bar = std::max(p.r_bar, a.reward);
      if (a.index == 0) continue;
      double gn = norm_inf(a.consumption);
      if (!any_nonvoid) {
        p.g_bar = gn;
        p.g_under = gn;
        any_nonvoid = true;
      } else {
        p.g_bar = std::max(p.g_bar, gn);
        p.g_under = std::min(p.g_under, gn);
      }
      for (int j = 0; j < p.m; ++j)
        if (rho[j] > 0)
          p.alpha_star = std::max(p.alpha_star, a.consumption[j] / rho[j]);
    }
  }
  // A void-only sequence has no consumption scale; zero keeps the depletion
  // profile inert (remaining never drops below zero).
  if (!any_nonvoid) {
    p.g_bar = 0.0;
    p.g_under = 0.0;
  }
  p.mu_max.resize(p.m);
  for (int j = 0; j < p.m; ++j)
    p.mu_max[j] = (rho[j] > 0 ? p.r_bar / rho[j] : 0.0) + 1.0;
  p.kappa = norm1(p.mu_max);
  return p;
}

std::vector<ValidationIssue> validate_instance(
    const ArrivalSequence& seq, const Vec& rho, int T,
    const std::optional<DeclaredBounds>& declared) {
  std::vector<ValidationIssue> issues;
  auto add = [&](ErrorCode c, int t, int index, int j, std::string msg) {
    issues.push_back({c, t, index, j, std::move(msg)});
  };

  if (static_cast<int>(seq.size()) != T)
    add(ErrorCode::length_mismatch, -1, -1, -1,
        "sequence length " + std::to_string(seq.size()) +
            " does not match horizon " + std::to_string(T));
  for (std::size_t j = 0; j < rho.size(); ++j)
    if (!(rho[j] > 0.0))
      add(ErrorCode::nonpositive_budget, -1, -1, static_cast<int>(j),
          "budget rate for resource " + std::to_string(j) + " must be positive");

  const int m = static_cast<int>(rho.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto& req = seq[t];
    const int ti = static_cast<int>(t);
    if (req.actions.empty()) {
      add(ErrorCode::missing_void_action, ti, -1, -1,
          "request " + std::to_string(t) + " has no actions");
      continue;
    }
    const Action& v = req.actions.front();
    bool void_ok = v.index == 0 && v.reward == 0.0 &&
                   static_cast<int>(v.consumption.size()) == m;
    if (void_ok)
      for (double g : v.consumption)
        if (g != 0.0) void_ok = false;
    if (!void_ok)
      add(ErrorCode::missing_void_action, ti, -1, -1,
          "request " + std::to_string(t) +
              " must list the void action (index 0, zero reward, zero "
              "consumption) first");
    std::set<int> seen;
    for (const auto& a : req.actions) {
      if (!seen.insert(a.index).second)
        add(ErrorCode::parse, ti, a.index, -1,
            "request " + std::to_string(t) + " repeats action index " +
                std::to_string(a.index));
      if (static_cast<int>(a.consumption.size()) != m) {
        add(ErrorCode::length_mismatch, ti, a.index, -1,
            "action consumption length does not match resource count");
        continue;
      }
      for (int j = 0; j < m; ++j)
        if (a.consumption[j] < 0.0)
          add(ErrorCode::consumption_out_of_range, ti, a.index, j,
              "negative consumption");
      if (declared) {
        if (a.reward > declared->r_bar)
          add(ErrorCode::reward_exceeds_bound, ti, a.index, -1,
              "reward " + std::to_string(a.reward) + " exceeds declared bound " +
                  std::to_string(declared->r_bar));
        if (a.index != 0) {
          double gn = norm_inf(a.consumption);
          if (gn > declared->g_bar || gn < declared->g_under)
            add(ErrorCode::consumption_out_of_range, ti, a.index, -1,
                "consumption max-norm " + std::to_string(gn) +
                    " outside declared [" + std::to_string(declared->g_under) +
                    ", " + std::to_string(declared->g_bar) + "]");
        }
      }
    }
  }
  return issues;
}

Instance make_instance(ArrivalSequence seq, Vec rho, int T) {
  auto issues = validate_instance(seq, rho, T);
  if (!issues.empty())
    throw Error(issues.front().code, issues.front().message);
  Instance inst;
  inst.params = compute_params(seq, rho, T);
  inst.seq = std::move(seq);
  return inst;
}

namespace {

// Shared scoring loop. With a ledger, actions exceeding it are skipped; the
// void action keeps the candidate set nonempty.
const Action* argmax_action(const ArrivalRequest& req, const Vec& mu,
                            const Vec* remaining) {
  const Action* best = nullptr;
  double best_score = 0.0;
  for (const auto& a : req.actions) {
    if (remaining) {
      bool fits = true;
      for (std::size_t j = 0; j < remaining->size(); ++j)
        if (a.consumption[j] > (*remaining)[j]) {
          fits = false;
          break;
        }
      if (!fits) continue;
    }
    double score = a.reward - dot(mu, a.consumption);
    if (!best || score > best_score ||
        (score == best_score &&
         (a.reward > best->reward ||
          (a.reward == best->reward && a.index < best->index)))) {
      best = &a;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

const Action& best_response(const ArrivalRequest& req, const Vec& mu,
                            const Vec& remaining) {
  const Action* best = argmax_action(req, mu, &remaining);
  if (!best)
    throw Error(ErrorCode::infeasible_action,
                "request offers no feasible action; void action missing");
  return *best;
}

double conjugate_value(const ArrivalRequest& req, const Vec& mu) {
  const Action* best = argmax_action(req, mu, nullptr);
  if (!best)
    throw Error(ErrorCode::infeasible_action, "request has no actions");
  return best->reward - dot(mu, best->consumption);
}

}  // namespace ora
