#include <cmath>

#include <gtest/gtest.h>

#include "fslp/outer.hpp"
#include "fslp/problems.hpp"

using namespace fslp;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

void expect_same_run(const SolveReport& a, const SolveReport& b) {
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.n_outer, b.n_outer);
  EXPECT_EQ(a.counters.n_g_evals, b.counters.n_g_evals);
  EXPECT_EQ(a.counters.n_jac_evals, b.counters.n_jac_evals);
  EXPECT_EQ(a.counters.n_lp_solves, b.counters.n_lp_solves);
  EXPECT_TRUE(a.w_star == b.w_star);
}

}  // namespace

TEST(TrustRegion, UpdateExamples) {
  FslpConfig cfg;
  EXPECT_DOUBLE_EQ(trust_region_update(0.9, 0.25, true, cfg), 0.5);
  EXPECT_DOUBLE_EQ(trust_region_update(-0.1, 0.25, true, cfg), 0.125);
  EXPECT_DOUBLE_EQ(trust_region_update(0.9, 0.25, false, cfg), 0.25);
  EXPECT_DOUBLE_EQ(trust_region_update(0.5, 0.25, true, cfg), 0.25);
  EXPECT_DOUBLE_EQ(trust_region_update(0.9, 3.0, true, cfg), cfg.delta_max);
  EXPECT_THROW(trust_region_update(0.9, 0.0, true, cfg), std::invalid_argument);
}

TEST(Solve, CircleReachesOptimum) {
  const ToyProblem toy = circle_problem(false);
  for (int depth : {0, 1, 5}) {
    FslpConfig cfg;
    cfg.aa_depth = depth;
    const SolveReport rep = solve(toy.nlp, toy.feasible_start, cfg);
    ASSERT_EQ(rep.status, SolveStatus::Optimal) << depth;
    // h <= 1e-6 admits points about sqrt(1e-6) along the circle from (1, 0)
    EXPECT_NEAR(rep.objective, -1.0, 1e-6) << depth;
    EXPECT_NEAR(rep.w_star[0], 1.0, 1e-6) << depth;
    EXPECT_NEAR(rep.w_star[1], 0.0, 2e-3) << depth;
    EXPECT_EQ(rep.variant, cfg.variant_label());
  }
}

TEST(Solve, ConstrainedCircle) {
  const ToyProblem toy = circle_problem(true);
  const SolveReport rep = solve(toy.nlp, toy.feasible_start, FslpConfig{});
  ASSERT_EQ(rep.status, SolveStatus::Optimal);
  EXPECT_LE((rep.w_star - toy.known_optimum).norm(), 1e-6);
}

TEST(Solve, StartAtOptimumTakesNoStep) {
  const ToyProblem toy = circle_problem(false);
  const SolveReport rep = solve(toy.nlp, vec2(1.0, 0.0), FslpConfig{});
  EXPECT_EQ(rep.status, SolveStatus::Optimal);
  ASSERT_EQ(rep.outer_trace.size(), 1u);
  EXPECT_FALSE(rep.outer_trace[0].accepted);
  EXPECT_FALSE(rep.outer_trace[0].inner_status.has_value());
  EXPECT_EQ(rep.iterates.size(), 1u);
}

TEST(Solve, InfeasibleStartRejected) {
  const ToyProblem toy = circle_problem(false);
  const SolveReport rep = solve(toy.nlp, vec2(0.0, 0.0), FslpConfig{});
  EXPECT_EQ(rep.status, SolveStatus::InitInfeasible);
  EXPECT_EQ(rep.counters.n_g_evals, 1);
  EXPECT_EQ(rep.counters.n_lp_solves, 0);
  EXPECT_TRUE(rep.outer_trace.empty());
}

TEST(Solve, TraceInvariants) {
  const ToyProblem toy = circle_problem(false);
  for (int depth : {0, 1}) {
    FslpConfig cfg;
    cfg.aa_depth = depth;
    const SolveReport rep = solve(toy.nlp, toy.feasible_start, cfg);
    ASSERT_EQ(rep.status, SolveStatus::Optimal);
    double prev = toy.nlp.c().dot(toy.feasible_start);
    EvalCounters scratch;
    for (const Vector& w : rep.iterates) EXPECT_LE(infeasibility(toy.nlp, w, scratch), cfg.inner().sigma_inner);
    for (const OuterTraceRow& row : rep.outer_trace) {
      EXPECT_LE(row.objective, prev + 1e-15);
      prev = row.objective;
      EXPECT_LE(row.h, cfg.inner().sigma_inner);
      if (row.accepted) {
        ASSERT_FALSE(row.inner_trace.empty());
        EXPECT_LT(row.inner_trace.back().dist_to_wbar / row.lp_step_norm, 0.5);
      }
    }
  }
}

TEST(Solve, CounterAccounting) {
  const ToyProblem toy = circle_problem(false);
  const SolveReport rep = solve(toy.nlp, toy.feasible_start, FslpConfig{});
  std::int64_t inner_evals = 0;
  std::int64_t inner_lps = 0;
  int accepted = 0;
  for (const OuterTraceRow& row : rep.outer_trace) {
    inner_evals += row.inner_iters;
    if (row.inner_status == InnerStatus::Converged || row.inner_status == InnerStatus::RatioViolated) {
      inner_lps += row.inner_iters - 1;
    }
    accepted += row.accepted ? 1 : 0;
  }
  // one g evaluation at the start; every other one happens inside the loops
  EXPECT_EQ(rep.counters.n_g_evals, 1 + inner_evals);
  // one Jacobian per distinct linearization point
  EXPECT_EQ(rep.counters.n_jac_evals, 1 + accepted);
  EXPECT_EQ(static_cast<int>(rep.iterates.size()), 1 + accepted);
  EXPECT_GE(rep.counters.n_lp_solves, static_cast<std::int64_t>(rep.outer_trace.size()) + inner_lps);
  EXPECT_EQ(rep.n_outer, static_cast<int>(rep.outer_trace.size()));
}

TEST(Solve, Deterministic) {
  const ToyProblem toy = circle_problem(false);
  FslpConfig cfg;
  cfg.aa_depth = 5;
  expect_same_run(solve(toy.nlp, toy.feasible_start, cfg), solve(toy.nlp, toy.feasible_start, cfg));

  const OcpSpec spec = point_mass_spec(true);
  const StructuredNlp nlp = build_p2p_ocp(spec);
  const OcpStart start = default_start(spec);
  const Vector w0 = init_feasible(spec, start.u_const, start.T0);
  expect_same_run(solve(nlp, w0, cfg), solve(nlp, w0, cfg));
}

TEST(Solve, MaxIterReported) {
  const ToyProblem toy = circle_problem(false);
  FslpConfig cfg;
  cfg.max_outer = 1;
  EXPECT_EQ(solve(toy.nlp, toy.feasible_start, cfg).status, SolveStatus::MaxIter);
}

TEST(FslpConfig, Validation) {
  FslpConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.variant_label(), "FSLP");
  cfg.aa_depth = 15;
  EXPECT_EQ(cfg.variant_label(), "AA(15)");
  cfg = FslpConfig{};
  cfg.delta0 = 5.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = FslpConfig{};
  cfg.good_rho = 1e-5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = FslpConfig{};
  cfg.shrink = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = FslpConfig{};
  cfg.aa_depth = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
