#include <doctest.h>

#include <random>

#include "ora/generators.hpp"
#include "ora/mirror_descent.hpp"
#include "ora/offline.hpp"
#include "test_support.hpp"

using namespace ora;
using test_support::reference_instance;
using test_support::request_with;

TEST_CASE("exact solve of the reference instance") {
  Instance inst = reference_instance();
  OfflineSolution sol = solve_opt(inst.seq, {3.0}, OptMethod::exact);
  CHECK(sol.value == 5.0);
  REQUIRE(sol.actions.size() == 3);
  CHECK(sol.actions[0] == 1);
  CHECK(sol.actions[1] == 0);
  CHECK(sol.actions[2] == 1);
}

TEST_CASE("zero budget admits only the void profile") {
  Instance inst = reference_instance();
  OfflineSolution sol = solve_opt(inst.seq, {0.0}, OptMethod::exact);
  CHECK(sol.value == 0.0);
  for (int a : sol.actions) CHECK(a == 0);
}

TEST_CASE("empty prefix has optimum zero") {
  Instance inst = reference_instance();
  std::span<const ArrivalRequest> empty(inst.seq.data(), 0);
  CHECK(solve_opt(empty, {0.0}, OptMethod::exact).value == 0.0);
  CHECK(solve_opt(empty, {0.0}, OptMethod::lp_relaxation).value == 0.0);
}

TEST_CASE("two-phase benchmark optimum takes only heavy requests") {
  // Unit phase then heavy phase at rate 1: the full budget fits exactly the
  // heavy half, worth (r_bar / worst ratio) * T.
  LowerBoundInstance lb = gen_lowerbound(10, 4.0, 2.0, LowerBoundVariant::two);
  OfflineSolution sol =
      solve_opt(lb.instance.seq, {10.0}, OptMethod::exact);
  CHECK(sol.value == 20.0);
}

TEST_CASE("exact solver reports an exhausted node budget") {
  LowerBoundInstance lb = gen_lowerbound(64, 4.0, 2.0, LowerBoundVariant::two);
  CHECK_THROWS_AS(
      solve_opt(lb.instance.seq, {64.0}, OptMethod::exact, 3), Error);
  try {
    solve_opt(lb.instance.seq, {64.0}, OptMethod::exact, 3);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::node_budget_exceeded);
  }
}

TEST_CASE("dual function values on the reference instance") {
  Instance inst = reference_instance();
  CHECK(dual_value(inst.seq, {0.0}, {1.0}, 3) == doctest::Approx(6.0));
  CHECK(dual_value(inst.seq, {3.0}, {1.0}, 3) == doctest::Approx(9.0));
  CHECK(dual_value(inst.seq, {1.0}, {1.0}, 3) == doctest::Approx(5.0));
}

TEST_CASE("weak duality on random small instances") {
  std::mt19937_64 rng(21);
  auto draw = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int rep = 0; rep < 20; ++rep) {
    Instance inst = test_support::random_instance(rng);
    Vec budget(inst.params.rho);
    for (double& b : budget) b *= inst.params.T;
    double opt = solve_opt(inst.seq, budget, OptMethod::exact).value;
    for (int i = 0; i < 25; ++i) {
      Vec mu(inst.params.mu_max.size());
      for (std::size_t j = 0; j < mu.size(); ++j) {
        mu[j] = inst.params.mu_max[j] * draw();
      }
      CHECK(dual_value(inst.seq, mu, inst.params.rho, inst.params.T) >=
            opt - 1e-9);
    }
  }
}

TEST_CASE("grid minimization of the dual on the reference instance") {
  Instance inst = reference_instance();
  auto [mu, value] = minimize_dual(inst.seq, inst.params, 0.1);
  CHECK(value == doctest::Approx(5.0));
  CHECK(mu[0] >= 1.0);
  CHECK(mu[0] <= 1.5);
  // Within the additive duality-gap bound of the optimum.
  double opt = solve_opt(inst.seq, {3.0}, OptMethod::exact).value;
  CHECK(value <= opt + (inst.params.m + 1) * inst.params.r_bar);
}

TEST_CASE("void-only instance minimizes the dual at zero") {
  ArrivalSequence seq;
  for (int t = 0; t < 3; ++t) {
    ArrivalRequest req;
    req.actions.push_back(Action{0, 0.0, {0.0}});
    seq.push_back(std::move(req));
  }
  Instance inst = make_instance(std::move(seq), {1.0}, 3);
  auto [mu, value] = minimize_dual(inst.seq, inst.params, 0.05);
  CHECK(mu[0] == 0.0);
  CHECK(value == 0.0);
}

TEST_CASE("too-fine grids are rejected") {
  Instance inst = reference_instance();
  CHECK_THROWS_AS(minimize_dual(inst.seq, inst.params, 1e-9, 1000), Error);
  try {
    minimize_dual(inst.seq, inst.params, 1e-9, 1000);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::grid_too_coarse);
  }
}

TEST_CASE("perfect-dual search on the reference instance") {
  Instance inst = reference_instance();
  auto [mu_star, reward] = find_perfect_dual(inst.seq, inst.params, 0.1);
  CHECK(reward == 5.0);
  CHECK(mu_star[0] > 1.0);
  CHECK(mu_star[0] < 1.5);
  // The spendthrift price 0 is not perfect: it overimpulsively takes the two
  // small rewards and starves the big one.
  RunTrajectory zero = run_prd(inst, {0.0});
  CHECK(zero.total_reward == 3.0);
  CHECK(test_support::actions_of(zero) == std::vector<int>{1, 1, 0});
}

TEST_CASE("ample budget makes the zero dual perfect") {
  ArrivalSequence seq;
  for (int t = 0; t < 3; ++t) seq.push_back(request_with(1.0, {1.0}));
  Instance inst = make_instance(std::move(seq), {1.0}, 3);
  auto [mu_star, reward] = find_perfect_dual(inst.seq, inst.params, 0.1);
  CHECK(mu_star[0] == 0.0);
  CHECK(reward == 3.0);
}

TEST_CASE("perfect-dual reward admits the additive guarantee") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 15; ++rep) {
    Instance inst = test_support::random_instance(rng);
    const ProblemParams& p = inst.params;
    Vec budget(p.rho);
    for (double& b : budget) b *= p.T;
    double opt = solve_opt(inst.seq, budget, OptMethod::exact).value;
    auto [mu_star, reward] = find_perfect_dual(inst.seq, p, -1.0);
    double slack =
        (p.g_bar / p.g_under + 1.0) * (p.m + 1) * p.r_bar;
    CHECK(reward + slack >= opt);
  }
}

TEST_CASE("fractional relaxation upper-bounds the exact optimum") {
  std::mt19937_64 rng(55);
  for (int rep = 0; rep < 40; ++rep) {
    Instance inst = test_support::random_instance(rng);
    Vec budget(inst.params.rho);
    for (double& b : budget) b *= inst.params.T;
    double exact = solve_opt(inst.seq, budget, OptMethod::exact).value;
    double lp = solve_opt(inst.seq, budget, OptMethod::lp_relaxation).value;
    CHECK(lp >= exact - 1e-9);
  }
}

TEST_CASE("relaxation is tight when its optimum is integral") {
  Instance inst = reference_instance();
  double lp = solve_opt(inst.seq, {3.0}, OptMethod::lp_relaxation).value;
  CHECK(lp == doctest::Approx(5.0));
  LowerBoundInstance lb = gen_lowerbound(10, 4.0, 2.0, LowerBoundVariant::two);
  CHECK(solve_opt(lb.instance.seq, {10.0}, OptMethod::lp_relaxation).value ==
        doctest::Approx(20.0));
}

TEST_CASE("prefix optimum grows with the prefix on a repeated request") {
  ArrivalSequence seq;
  for (int t = 0; t < 6; ++t) seq.push_back(request_with(1.0, {1.0}));
  Instance inst = make_instance(std::move(seq), {0.5}, 6);
  double prev = 0.0;
  for (int t = 1; t <= 6; ++t) {
    std::span<const ArrivalRequest> prefix(inst.seq.data(),
                                           static_cast<std::size_t>(t));
    Vec budget{0.5 * t};
    double v = solve_opt(prefix, budget, OptMethod::exact).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}
