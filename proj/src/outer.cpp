#include "fslp/outer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fslp/lp.hpp"

namespace fslp {

void FslpConfig::validate() const {
  if (!(delta0 > 0.0)) throw std::invalid_argument("delta0 must be > 0");
  if (!(delta0 <= delta_max)) throw std::invalid_argument("delta0 must not exceed delta_max");
  if (!(0.0 < shrink && shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (!(expand > 1.0)) throw std::invalid_argument("expand must be > 1");
  if (!(0.0 < accept_rho && accept_rho < good_rho && good_rho < 1.0)) {
    throw std::invalid_argument("require 0 < accept_rho < good_rho < 1");
  }
  if (!(model_tol >= 0.0)) throw std::invalid_argument("model_tol must be >= 0");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (aa_depth < 0) throw std::invalid_argument("aa_depth must be >= 0");
  inner().validate();
  if (aa_depth > 0) {
    AaConfig check = aa;
    check.depth = aa_depth;
    check.validate();
  }
}

std::string FslpConfig::variant_label() const {
  return aa_depth == 0 ? "FSLP" : "AA(" + std::to_string(aa_depth) + ")";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::InitInfeasible: return "InitInfeasible";
    case SolveStatus::Stalled: return "Stalled";
  }
  return "?";
}

double trust_region_update(double rho, double delta, bool boundary_hit, const FslpConfig& cfg) {
  if (!(delta > 0.0)) throw std::invalid_argument("trust_region_update: delta must be > 0");
  if (!(rho >= cfg.accept_rho)) return cfg.shrink * delta;
  if (rho >= cfg.good_rho && boundary_hit) return std::min(cfg.expand * delta, cfg.delta_max);
  return delta;
}

SolveReport solve(const StructuredNlp& nlp, const Vector& w_init, const FslpConfig& cfg) {
  cfg.validate();
  if (w_init.size() != nlp.n_w()) throw std::invalid_argument("solve: initial point has wrong length");
  const auto started = std::chrono::steady_clock::now();

  SolveReport report;
  report.variant = cfg.variant_label();
  AaConfig aa = cfg.aa;
  aa.depth = std::max(1, cfg.aa_depth);
  EvalCounters& counters = report.counters;

  auto finish = [&](SolveStatus status, const Vector& w) {
    report.status = status;
    report.w_star = w;
    report.objective = nlp.c().dot(w);
    report.n_outer = static_cast<int>(report.outer_trace.size());
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return std::move(report);
  };

  Vector g_hat = nlp.eval_g(nlp.select(w_init), counters);
  double h_hat = infeasibility_from(nlp, w_init, g_hat);
  if (h_hat > cfg.inner().sigma_inner) return finish(SolveStatus::InitInfeasible, w_init);

  Vector w_hat = w_init;
  double delta = cfg.delta0;
  report.iterates.push_back(w_hat);
  std::optional<JacobianSnapshot> snapshot;

  for (int k = 0; k < cfg.max_outer; ++k) {
    if (!snapshot) snapshot = make_snapshot(nlp, w_hat, g_hat, counters);

    OuterTraceRow row;
    row.k = k;
    row.delta = delta;

    const LpOutcome lp = solve_lp(build_trust_region_lp(nlp, *snapshot, delta));
    ++counters.n_lp_solves;
    if (lp.status != LpStatus::Optimal) {
      // Treated like an inner failure: retry with a smaller box at the same point.
      row.inner_status = InnerStatus::LpFailed;
      row.objective = nlp.c().dot(w_hat);
      row.h = h_hat;
      report.outer_trace.push_back(std::move(row));
      delta *= cfg.shrink;
      if (delta < 1e-12) return finish(SolveStatus::Stalled, w_hat);
      continue;
    }

    const Vector& w_bar = lp.solution;
    const double model = nlp.c().dot(w_bar - w_hat);
    row.model_decrease = model;
    row.lp_step_norm = (w_bar - w_hat).norm();
    if (model >= -cfg.model_tol) {
      row.objective = nlp.c().dot(w_hat);
      row.h = h_hat;
      report.outer_trace.push_back(std::move(row));
      return finish(SolveStatus::Optimal, w_hat);
    }

    InnerResult inner =
        cfg.aa_depth == 0
            ? feasibility_iterations(nlp, w_hat, w_bar, *snapshot, delta, cfg.inner(), counters)
            : aa_feasibility_iterations(nlp, w_hat, w_bar, *snapshot, delta, aa, counters);
    row.inner_status = inner.status;
    row.inner_iters = static_cast<int>(inner.g_evals_used);

    if (inner.status != InnerStatus::Converged) {
      delta *= cfg.shrink;
    } else {
      const double rho = (nlp.c().dot(w_hat) - nlp.c().dot(inner.w_tilde)) / (-model);
      double step_inf = 0.0;
      for (const Index i : nlp.py_indices()) step_inf = std::max(step_inf, std::abs(w_bar[i] - w_hat[i]));
      const bool boundary_hit = step_inf >= 0.999 * delta;
      row.accepted = rho >= cfg.accept_rho;
      delta = trust_region_update(rho, delta, boundary_hit, cfg);
      if (row.accepted) {
        w_hat = inner.w_tilde;
        g_hat = std::move(inner.g_at_tilde);
        h_hat = infeasibility_from(nlp, w_hat, g_hat);
        snapshot.reset();
        report.iterates.push_back(w_hat);
      }
    }
    row.objective = nlp.c().dot(w_hat);
    row.h = h_hat;
    row.inner_trace = std::move(inner.iterates_trace);
    report.outer_trace.push_back(std::move(row));
    if (delta < 1e-12) return finish(SolveStatus::Stalled, w_hat);
  }
  return finish(SolveStatus::MaxIter, w_hat);
}

}  // namespace fslp
