#include "fslp/inner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fslp {

void InnerConfig::validate() const {
  if (!(sigma_inner > 0.0 && sigma_inner < 1e-5)) {
    throw std::invalid_argument("sigma_inner must lie in (0, 1e-5)");
  }
  if (max_inner < 1) throw std::invalid_argument("max_inner must be >= 1");
  if (divergence_window < 1) throw std::invalid_argument("divergence_window must be >= 1");
  if (!(divergence_growth > 0.0)) throw std::invalid_argument("divergence_growth must be > 0");
}

const char* to_string(InnerStatus status) {
  switch (status) {
    case InnerStatus::Converged: return "Converged";
    case InnerStatus::Diverged: return "Diverged";
    case InnerStatus::RatioViolated: return "RatioViolated";
    case InnerStatus::LpFailed: return "LpFailed";
    case InnerStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

double projection_ratio(const Vector& w_bar, const Vector& w, const Vector& w_hat) {
  const double step = (w_bar - w_hat).norm();
  const double proj = (w_bar - w).norm();
  if (step == 0.0) return 0.0;
  return proj / step;
}

namespace detail {

bool InnerLoopGuard::diverging(double h, const Vector& w) {
  if (last_h_ >= 0.0 && h > cfg_.divergence_growth * last_h_) {
    ++growth_run_;
  } else {
    growth_run_ = 0;
  }
  last_h_ = h;
  if (growth_run_ >= cfg_.divergence_window) return true;

  double dist = 0.0;
  for (const Index i : nlp_.py_indices()) dist = std::max(dist, std::abs(w[i] - w_hat_[i]));
  return dist > 10.0 * trust_radius_;
}

}  // namespace detail

InnerResult feasibility_iterations(const StructuredNlp& nlp, const Vector& w_hat,
                                   const Vector& w_bar, const JacobianSnapshot& snapshot,
                                   double trust_radius, const InnerConfig& cfg,
                                   EvalCounters& counters) {
  cfg.validate();
  InnerResult result;
  detail::InnerLoopGuard guard(cfg, nlp, w_hat, trust_radius);
  Vector w = w_bar;

  for (int l = 0; l < cfg.max_inner; ++l) {
    Vector g_value = nlp.eval_g(nlp.select(w), counters);
    ++result.g_evals_used;
    const double h = infeasibility_from(nlp, w, g_value);

    InnerTraceRow row;
    row.l = l;
    row.h = h;
    row.dist_to_wbar = (w - w_bar).norm();
    row.dist_to_what = (w - w_hat).norm();
    row.w = w;
    result.iterates_trace.push_back(std::move(row));

    if (h <= cfg.sigma_inner) {
      result.status = projection_ratio(w_bar, w, w_hat) < 0.5 ? InnerStatus::Converged
                                                              : InnerStatus::RatioViolated;
      result.w_tilde = w;
      result.g_at_tilde = std::move(g_value);
      return result;
    }
    if (guard.diverging(h, w)) {
      result.status = InnerStatus::Diverged;
      return result;
    }

    const Vector delta = zero_order_mismatch_from(snapshot, w, g_value);
    const LpOutcome lp = solve_lp(build_plp(nlp, snapshot, delta, trust_radius));
    ++counters.n_lp_solves;
    if (lp.status != LpStatus::Optimal) {
      result.status = InnerStatus::LpFailed;
      return result;
    }
    w = lp.solution;
  }
  result.status = InnerStatus::IterLimit;
  return result;
}

std::vector<double> contraction_estimate(const std::vector<InnerTraceRow>& trace,
                                         const Vector& w_ref) {
  if (trace.size() < 3) {
    throw std::invalid_argument("contraction_estimate: need at least 3 iterates");
  }
  std::vector<double> rates;
  for (std::size_t l = 0; l + 1 < trace.size(); ++l) {
    const double den = (trace[l].w - w_ref).norm();
    if (den <= 1e-14) continue;
    rates.push_back((trace[l + 1].w - w_ref).norm() / den);
  }
  if (!rates.empty() && rates.back() == 0.0) rates.pop_back();
  return rates;
}

}  // namespace fslp
