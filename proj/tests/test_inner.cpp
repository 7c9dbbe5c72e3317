#include <cmath>

#include <gtest/gtest.h>

#include "fslp/inner.hpp"
#include "fslp/problems.hpp"
#include "oracles.hpp"

using namespace fslp;

namespace {

struct CircleStep {
  ToyProblem toy = circle_problem(false);
  Vector w_hat = Vector::Zero(2);
  Vector w_bar = Vector::Zero(2);
  JacobianSnapshot snap;
  EvalCounters counters;

  explicit CircleStep(double delta) {
    w_hat << 0.0, 1.0;
    w_bar << delta, 1.0;
    snap = make_snapshot(toy.nlp, w_hat, counters);
  }
};

InnerTraceRow row_at(const Vector& w) {
  InnerTraceRow r;
  r.w = w;
  return r;
}

}  // namespace

TEST(FeasibilityIterations, CircleMatchesScalarRecursion) {
  CircleStep s(0.25);
  const InnerResult res = feasibility_iterations(s.toy.nlp, s.w_hat, s.w_bar, s.snap, 0.25, {}, s.counters);
  ASSERT_EQ(res.status, InnerStatus::Converged);
  const auto ref = oracle::circle_plain_iterates(0.25, static_cast<int>(res.iterates_trace.size()));
  for (std::size_t l = 0; l < res.iterates_trace.size(); ++l) {
    EXPECT_EQ(res.iterates_trace[l].l, static_cast<int>(l));
    EXPECT_NEAR(res.iterates_trace[l].w[0], ref[l][0], 1e-9) << "l=" << l;
    EXPECT_NEAR(res.iterates_trace[l].w[1], ref[l][1], 1e-9) << "l=" << l;
  }
  EXPECT_DOUBLE_EQ(ref[1][1], 0.96875);
  EXPECT_NEAR(ref[2][1], 0.96826171875, 1e-15);
  EXPECT_NEAR(res.w_tilde[0], 0.25, 1e-12);
  EXPECT_NEAR(res.w_tilde[1], std::sqrt(0.9375), 1e-6);
  EXPECT_NEAR(projection_ratio(s.w_bar, res.w_tilde, s.w_hat), 0.1270, 1e-4);
  EXPECT_LE(res.iterates_trace.back().h, 1e-6);
}

TEST(FeasibilityIterations, OneEvalPerLoopEntry) {
  CircleStep s(0.25);
  const EvalCounters before = s.counters;
  const InnerResult res = feasibility_iterations(s.toy.nlp, s.w_hat, s.w_bar, s.snap, 0.25, {}, s.counters);
  EXPECT_EQ(res.g_evals_used, static_cast<std::int64_t>(res.iterates_trace.size()));
  EXPECT_EQ(s.counters.n_g_evals - before.n_g_evals, res.g_evals_used);
  EXPECT_EQ(s.counters.n_jac_evals, before.n_jac_evals);
  // the convergence test comes first, so the last entry solves no PLP
  EXPECT_EQ(s.counters.n_lp_solves - before.n_lp_solves, res.g_evals_used - 1);
}

TEST(FeasibilityIterations, ZeroStepConvergesImmediately) {
  CircleStep s(0.25);
  const InnerResult res = feasibility_iterations(s.toy.nlp, s.w_hat, s.w_hat, s.snap, 0.25, {}, s.counters);
  EXPECT_EQ(res.status, InnerStatus::Converged);
  EXPECT_TRUE(res.w_tilde == s.w_hat);
  EXPECT_EQ(res.g_evals_used, 1);
  EXPECT_EQ(projection_ratio(s.w_hat, s.w_hat, s.w_hat), 0.0);
}

TEST(FeasibilityIterations, AffineResidualConvergesInOnePlp) {
  // g(y) = y0 + 2 y1 - 1 = 0, min -y0 - y1 in a box of radius 0.5
  StructuredNlp nlp(-Vector::Ones(2), Matrix::Zero(1, 2), Matrix(0, 2), Vector(0), {0, 1},
                    [](const Vector& y) { return Vector::Constant(1, y[0] + 2.0 * y[1] - 1.0); },
                    [](const Vector&) {
                      Matrix j(1, 2);
                      j << 1.0, 2.0;
                      return j;
                    });
  EvalCounters counters;
  Vector w_hat(2);
  w_hat << 1.0, 0.0;
  const JacobianSnapshot snap = make_snapshot(nlp, w_hat, counters);
  Vector w_bar(2);
  w_bar << 0.5, 0.5;  // off the line: forces one PLP
  const InnerResult res = feasibility_iterations(nlp, w_hat, w_bar, snap, 0.5, {}, counters);
  ASSERT_EQ(res.iterates_trace.size(), 2u);
  EXPECT_LE(res.iterates_trace[1].h, 1e-12);
  EXPECT_EQ(counters.n_lp_solves, 1);
}

TEST(FeasibilityIterations, RatioViolationReported) {
  // short step from ŵ, long projection back to the circle
  CircleStep s(0.25);
  Vector w_bar(2);
  w_bar << 0.0, 1.2;
  const InnerResult res = feasibility_iterations(s.toy.nlp, s.w_hat, w_bar, s.snap, 0.25, {}, s.counters);
  EXPECT_EQ(res.status, InnerStatus::RatioViolated);
}

TEST(FeasibilityIterations, IterLimitAndDivergence) {
  CircleStep s(0.25);
  InnerConfig few;
  few.max_inner = 2;
  EXPECT_EQ(feasibility_iterations(s.toy.nlp, s.w_hat, s.w_bar, s.snap, 0.25, few, s.counters).status,
            InnerStatus::IterLimit);

  // a large box around (0, 1): the frozen Jacobian loses track of the circle
  CircleStep big(0.95);
  const InnerResult res =
      feasibility_iterations(big.toy.nlp, big.w_hat, big.w_bar, big.snap, 0.95, {}, big.counters);
  EXPECT_NE(res.status, InnerStatus::Converged);
}

TEST(FeasibilityIterations, LpFailureReported) {
  // g = (y, y + y^2): the shifted rows demand w = 0 and w = -w_l^2 at once
  StructuredNlp nlp(Vector::Zero(1), Matrix::Zero(2, 1), Matrix(0, 1), Vector(0), {0},
                    [](const Vector& y) {
                      Vector out(2);
                      out << y[0], y[0] + y[0] * y[0];
                      return out;
                    },
                    [](const Vector& y) {
                      Matrix j(2, 1);
                      j << 1.0, 1.0 + 2.0 * y[0];
                      return j;
                    });
  EvalCounters counters;
  const JacobianSnapshot snap = make_snapshot(nlp, Vector::Zero(1), counters);
  const InnerResult res =
      feasibility_iterations(nlp, Vector::Zero(1), Vector::Constant(1, 0.005), snap, 0.01, {}, counters);
  EXPECT_EQ(res.status, InnerStatus::LpFailed);
}

TEST(InnerConfig, Validation) {
  InnerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.sigma_inner = 1e-5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.sigma_inner = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = InnerConfig{};
  cfg.max_inner = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ContractionEstimate, GeometricSequence) {
  std::vector<InnerTraceRow> trace;
  for (int l = 0; l < 8; ++l) trace.push_back(row_at(Vector::Constant(1, std::ldexp(1.0, -l))));
  const auto rates = contraction_estimate(trace, Vector::Zero(1));
  ASSERT_EQ(rates.size(), 7u);
  for (double r : rates) EXPECT_DOUBLE_EQ(r, 0.5);
}

TEST(ContractionEstimate, TooShort) {
  std::vector<InnerTraceRow> trace{row_at(Vector::Zero(1)), row_at(Vector::Zero(1))};
  EXPECT_THROW(contraction_estimate(trace, Vector::Zero(1)), std::invalid_argument);
}

TEST(ContractionEstimate, CircleRatesMatchRecursion) {
  CircleStep s(0.25);
  InnerConfig tight;
  tight.sigma_inner = 1e-14;
  tight.max_inner = 12;
  const InnerResult res = feasibility_iterations(s.toy.nlp, s.w_hat, s.w_bar, s.snap, 0.25, tight, s.counters);
  ASSERT_GE(res.iterates_trace.size(), 4u);
  const Vector w_ref = res.iterates_trace.back().w;
  const auto rates = contraction_estimate(res.iterates_trace, w_ref);
  // map derivative at the fixed point is 1 - w2*
  const double w2_star = std::sqrt(0.9375);
  ASSERT_GE(rates.size(), 2u);
  EXPECT_NEAR(rates[1], 1.0 - w2_star, 2e-3);
}
