#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fslp/lp.hpp"
#include "fslp/problems.hpp"
#include "oracles.hpp"

using namespace fslp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoxedLp make_lp(Vector cost, Matrix ineq, Vector ineq_rhs, Vector lower, Vector upper) {
  BoxedLp lp;
  const Index n = cost.size();
  lp.cost = std::move(cost);
  lp.eq_matrix = Matrix(0, n);
  lp.eq_rhs = Vector(0);
  lp.ineq_matrix = std::move(ineq);
  lp.ineq_rhs = std::move(ineq_rhs);
  lp.lower = std::move(lower);
  lp.upper = std::move(upper);
  return lp;
}

}  // namespace

TEST(SolveLp, TriangleExample) {
  Matrix A(1, 2);
  A << 1.0, 1.0;
  Vector c(2);
  c << -2.0, -1.0;
  const BoxedLp lp = make_lp(c, A, Vector::Ones(1), Vector::Zero(2), Vector::Constant(2, kInf));
  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_NEAR(out.solution[0], 1.0, 1e-12);
  EXPECT_NEAR(out.solution[1], 0.0, 1e-12);
  EXPECT_NEAR(out.objective, -2.0, 1e-12);
  EXPECT_NEAR(*oracle::vertex_enumeration(lp), -2.0, 1e-12);
}

TEST(SolveLp, BoundOnly) {
  const BoxedLp lp = make_lp(Vector::Ones(1), Matrix(0, 1), Vector(0), Vector::Zero(1), Vector::Ones(1));
  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.solution[0], 0.0);
  EXPECT_EQ(out.objective, 0.0);
}

TEST(SolveLp, Infeasible) {
  const BoxedLp lp = make_lp(Vector::Ones(1), Matrix::Ones(1, 1), Vector::Constant(1, -1.0),
                             Vector::Zero(1), Vector::Constant(1, kInf));
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);

  // the same conflict through a general row and an equality
  BoxedLp lp2 = make_lp(Vector::Ones(2), Matrix::Ones(1, 2), Vector::Constant(1, 1.0),
                        Vector::Zero(2), Vector::Constant(2, kInf));
  lp2.eq_matrix = Matrix::Ones(1, 2);
  lp2.eq_rhs = Vector::Constant(1, 3.0);
  EXPECT_EQ(solve_lp(lp2).status, LpStatus::Infeasible);
}

TEST(SolveLp, Unbounded) {
  Vector c(2);
  c << -1.0, 0.0;
  Matrix A(1, 2);
  A << -1.0, 1.0;
  const BoxedLp lp = make_lp(c, A, Vector::Zero(1), Vector::Zero(2), Vector::Constant(2, kInf));
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST(SolveLp, FreeVariablesWithEqualities) {
  // min w1 + w2 s.t. w1 - w2 = 1, w1 + 2 w2 >= -2, free variables
  BoxedLp lp = make_lp(Vector::Ones(2), Matrix(1, 2), Vector::Constant(1, 2.0),
                       Vector::Constant(2, -kInf), Vector::Constant(2, kInf));
  lp.ineq_matrix << -1.0, -2.0;
  lp.eq_matrix = Matrix(1, 2);
  lp.eq_matrix << 1.0, -1.0;
  lp.eq_rhs = Vector::Ones(1);
  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  // w2 = w1 - 1, 3 w1 - 2 >= -2 -> w1 >= 0
  EXPECT_NEAR(out.solution[0], 0.0, 1e-12);
  EXPECT_NEAR(out.solution[1], -1.0, 1e-12);
}

TEST(SolveLp, BealeCyclingExample) {
  Matrix A(3, 4);
  A << 0.25, -8.0, -1.0, 9.0, 0.5, -12.0, -0.5, 3.0, 0.0, 0.0, 1.0, 0.0;
  Vector c(4);
  c << -0.75, 20.0, -0.5, 6.0;
  Vector rhs(3);
  rhs << 0.0, 0.0, 1.0;
  const BoxedLp lp = make_lp(c, A, rhs, Vector::Zero(4), Vector::Constant(4, kInf));
  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  const auto ref = oracle::vertex_enumeration(lp);
  ASSERT_TRUE(ref);
  EXPECT_NEAR(out.objective, *ref, 1e-9);
  EXPECT_NEAR(out.objective, -1.25, 1e-9);
}

TEST(SolveLp, MarshallSuurballeCyclingExample) {
  Matrix A(3, 4);
  A << -2.0, -9.0, 1.0, 9.0, 1.0 / 3.0, 1.0, -1.0 / 3.0, -2.0, 2.0, 3.0, -1.0, -12.0;
  Vector c(4);
  c << -2.0, -3.0, 1.0, 12.0;
  Vector rhs(3);
  rhs << 0.0, 0.0, 2.0;
  const BoxedLp lp = make_lp(c, A, rhs, Vector::Zero(4), Vector::Constant(4, kInf));
  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  const auto ref = oracle::vertex_enumeration(lp);
  ASSERT_TRUE(ref);
  EXPECT_NEAR(out.objective, *ref, 1e-9);
  EXPECT_NEAR(out.objective, -2.0, 1e-9);
}

TEST(SolveLp, DegenerateVertexTerminates) {
  // many constraints through the optimal vertex (0, 0)
  const int rows = 12;
  Matrix A(rows, 2);
  for (int i = 0; i < rows; ++i) {
    const double t = 0.1 + 0.1 * i;
    A(i, 0) = -t;
    A(i, 1) = -(1.3 - t);
  }
  Vector c(2);
  c << 1.0, 1.0;
  const BoxedLp lp = make_lp(c, A, Vector::Zero(rows), Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_NEAR(out.objective, *oracle::vertex_enumeration(lp), 1e-9);
}

TEST(SolveLp, PivotLimitReported) {
  std::mt19937_64 rng(3);
  BoxedLp lp;
  do {
    lp = oracle::random_lp(rng, true);
  } while (lp.n_ineq() < 4);
  EXPECT_EQ(solve_lp(lp, 0).status, LpStatus::IterationLimit);
}

TEST(SolveLp, RandomAgainstVertexEnumeration) {
  std::mt19937_64 rng(20240611);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const BoxedLp lp = oracle::random_lp(rng, trial % 3 != 0);
    const auto ref = oracle::vertex_enumeration(lp);
    const LpOutcome out = solve_lp(lp);
    if (!ref) {
      EXPECT_EQ(out.status, LpStatus::Infeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(out.status, LpStatus::Optimal) << "trial " << trial;
    ++optimal;
    EXPECT_NEAR(out.objective, *ref, 1e-8) << "trial " << trial;
    const double rhs_scale =
        1.0 + std::max(lp.n_eq() ? lp.eq_rhs.lpNorm<Eigen::Infinity>() : 0.0,
                       lp.n_ineq() ? lp.ineq_rhs.lpNorm<Eigen::Infinity>() : 0.0);
    EXPECT_LE(oracle::lp_violation(lp, out.solution), 1e-9 * rhs_scale) << "trial " << trial;
    EXPECT_TRUE(((out.solution - lp.lower).array() >= -1e-12).all());
    EXPECT_TRUE(((lp.upper - out.solution).array() >= -1e-12).all());
  }
  EXPECT_GT(optimal, 150);
  EXPECT_GT(infeasible, 5);
}

TEST(SolveLp, DeterministicForIdenticalInput) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const BoxedLp lp = oracle::random_lp(rng, true);
    const LpOutcome a = solve_lp(lp), b = solve_lp(lp);
    ASSERT_EQ(a.status, b.status);
    EXPECT_EQ(a.pivot_count, b.pivot_count);
    EXPECT_TRUE(a.solution == b.solution);
  }
}

TEST(BuildPlp, CircleLinearization) {
  const ToyProblem toy = circle_problem(false);
  EvalCounters counters;
  Vector w_hat(2);
  w_hat << 0.0, 1.0;
  const JacobianSnapshot snap = make_snapshot(toy.nlp, w_hat, counters);
  const BoxedLp lp = build_plp(toy.nlp, snap, Vector::Zero(1), 0.25);
  ASSERT_EQ(lp.n_eq(), 1);
  EXPECT_EQ(lp.eq_matrix(0, 0), 0.0);
  EXPECT_EQ(lp.eq_matrix(0, 1), 2.0);
  EXPECT_EQ(lp.eq_rhs[0], 2.0);
  EXPECT_EQ(lp.lower[0], -0.25);
  EXPECT_EQ(lp.upper[0], 0.25);
  EXPECT_EQ(lp.lower[1], 0.75);
  EXPECT_EQ(lp.upper[1], 1.25);

  const LpOutcome out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.solution[0], 0.25);
  EXPECT_NEAR(out.solution[1], 1.0, 1e-15);
}

TEST(BuildPlp, ZeroMismatchIsTrustRegionLp) {
  const OcpSpec spec = point_mass_spec(true, 4);
  const StructuredNlp nlp = build_p2p_ocp(spec);
  const OcpStart start = default_start(spec);
  const Vector w = init_feasible(spec, start.u_const, start.T0);
  EvalCounters counters;
  const JacobianSnapshot snap = make_snapshot(nlp, w, counters);
  const BoxedLp a = build_plp(nlp, snap, Vector::Zero(nlp.n_g()), 0.3);
  const BoxedLp b = build_trust_region_lp(nlp, snap, 0.3);
  EXPECT_TRUE(a.eq_matrix == b.eq_matrix);
  EXPECT_TRUE(a.eq_rhs == b.eq_rhs);
  EXPECT_TRUE(a.ineq_matrix == b.ineq_matrix);
  EXPECT_TRUE(a.ineq_rhs == b.ineq_rhs);
  EXPECT_TRUE(a.lower == b.lower);
  EXPECT_TRUE(a.upper == b.upper);
  const LpOutcome sa = solve_lp(a), sb = solve_lp(b);
  EXPECT_TRUE(sa.solution == sb.solution);

  // slacks are not in P_y, so their bounds stay infinite
  const OcpLayout layout = ocp_layout(spec);
  EXPECT_EQ(a.lower[layout.s0], -kInf);
  EXPECT_EQ(a.upper[layout.vel_slack], kInf);
  EXPECT_EQ(a.lower[layout.T], w[layout.T] - 0.3);
}

TEST(BuildPlp, SecondOrderCorrectionAtLpStep) {
  // the first PLP is linearized constraints shifted by δ(w̄)
  const ToyProblem toy = circle_problem(false);
  EvalCounters counters;
  Vector w_hat(2), w_bar(2);
  w_hat << 0.0, 1.0;
  w_bar << 0.25, 1.0;
  const JacobianSnapshot snap = make_snapshot(toy.nlp, w_hat, counters);
  const Vector delta = zero_order_mismatch(toy.nlp, w_bar, snap, counters);
  const BoxedLp lp = build_plp(toy.nlp, snap, delta, 0.25);
  // g(w̄) + G (w - w̄) = 0 -> 2 w2 = 2 w̄2 - g(w̄)
  const double g_bar = 0.0625;
  EXPECT_DOUBLE_EQ(lp.eq_rhs[0], 2.0 * 1.0 - g_bar);
}

TEST(BuildPlp, RejectsBadInput) {
  const ToyProblem toy = circle_problem(false);
  EvalCounters counters;
  const JacobianSnapshot snap = make_snapshot(toy.nlp, toy.feasible_start, counters);
  EXPECT_THROW(build_plp(toy.nlp, snap, Vector::Zero(2), 0.25), std::invalid_argument);
  EXPECT_THROW(build_plp(toy.nlp, snap, Vector::Zero(1), 0.0), std::invalid_argument);
}

TEST(LpDump, RoundTripsExactly) {
  std::mt19937_64 rng(5);
  BoxedLp lp = oracle::random_lp(rng, true);
  lp.lower[0] = -kInf;
  lp.upper[0] = kInf;
  std::stringstream ss;
  write_lp_dump(ss, lp);
  const BoxedLp back = read_lp_dump(ss);
  EXPECT_TRUE(back.cost == lp.cost);
  EXPECT_TRUE(back.eq_matrix == lp.eq_matrix);
  EXPECT_TRUE(back.eq_rhs == lp.eq_rhs);
  EXPECT_TRUE(back.ineq_matrix == lp.ineq_matrix);
  EXPECT_TRUE(back.ineq_rhs == lp.ineq_rhs);
  EXPECT_TRUE(back.lower == lp.lower);
  EXPECT_TRUE(back.upper == lp.upper);
}

TEST(LpDump, RejectsGarbage) {
  std::stringstream ss("not an lp\n");
  EXPECT_THROW(read_lp_dump(ss), std::runtime_error);
}
