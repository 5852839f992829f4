#pragma once

#include <optional>
#include <span>

#include "ora/types.hpp"

namespace ora {

// One structural defect found by validate_instance.
struct ValidationIssue {
  ErrorCode code;
  int t = -1;      // period (0-based), -1 when not applicable
  int index = -1;  // action index, -1 when not applicable
  int j = -1;      // resource, -1 when not applicable
  std::string message;
};

// Optional declared bounds to check actions against (rewards vs r_bar,
// non-void consumption max-norms vs [g_under, g_bar]). When absent only
// structural checks run.
struct DeclaredBounds {
  double r_bar = 0.0;
  double g_bar = 0.0;
  double g_under = 0.0;
};

// Scan the sequence and fill every derived scalar. rho must have length m.
ProblemParams compute_params(const ArrivalSequence& seq, const Vec& rho, int T);

// Structural checks: horizon/length agreement, positive budget rates, a void
// action (zero reward, zero consumption) listed first in every request,
// distinct indices, consistent consumption lengths, nonnegative consumption.
// Returns all issues found; empty means valid.
std::vector<ValidationIssue> validate_instance(
    const ArrivalSequence& seq, const Vec& rho, int T,
    const std::optional<DeclaredBounds>& declared = std::nullopt);

// validate + compute_params in one step; throws Error on the first issue.
Instance make_instance(ArrivalSequence seq, Vec rho, int T);

// Greedy dual-based selection: among actions with consumption <= remaining
// componentwise, maximize reward - mu . consumption. Ties broken by higher
// reward, then by lower index. The void action is always feasible, so a
// choice always exists.
const Action& best_response(const ArrivalRequest& req, const Vec& mu,
                            const Vec& remaining);

// Same maximization ignoring the ledger; >= 0 because of the void action.
double conjugate_value(const ArrivalRequest& req, const Vec& mu);

}  // namespace ora
