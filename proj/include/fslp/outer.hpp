#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fslp/anderson.hpp"
#include "fslp/inner.hpp"
#include "fslp/model.hpp"

namespace fslp {

struct FslpConfig {
  double delta0 = 0.25;
  double delta_max = 4.0;
  double shrink = 0.5;
  double expand = 2.0;
  double accept_rho = 1e-4;
  double good_rho = 0.75;
  double model_tol = 1e-9;
  int max_outer = 200;
  /// Anderson depth; 0 selects the plain feasibility iterations.
  int aa_depth = 0;
  AaConfig aa;  // depth is overwritten by aa_depth; aa.inner holds the inner settings

  const InnerConfig& inner() const noexcept { return aa.inner; }
  InnerConfig& inner() noexcept { return aa.inner; }

  void validate() const;
  /// "FSLP" or "AA(d)"
  std::string variant_label() const;
};

enum class SolveStatus { Optimal, MaxIter, InitInfeasible, Stalled };

const char* to_string(SolveStatus status);

struct OuterTraceRow {
  int k = 0;
  double objective = 0.0;  // cᵀŵ after this iteration's accept/reject decision
  double h = 0.0;          // h at that iterate
  double delta = 0.0;      // radius of the LP solved in this iteration
  double model_decrease = 0.0;  // m_k = cᵀ(w̄ - ŵ)
  std::optional<InnerStatus> inner_status;  // empty when the LP terminated the solve
  int inner_iters = 0;
  bool accepted = false;
  /// Inner trace and LP step of this iteration; not part of the CSV row.
  std::vector<InnerTraceRow> inner_trace;
  double lp_step_norm = 0.0;  // ||w̄ - ŵ||
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  Vector w_star;
  double objective = 0.0;
  int n_outer = 0;
  EvalCounters counters;
  double wall_seconds = 0.0;
  std::vector<OuterTraceRow> outer_trace;
  /// ŵ_0 followed by every accepted iterate.
  std::vector<Vector> iterates;
  std::string variant;
};

/// ρ-driven radius update: shrink below accept_rho, expand when ρ >= good_rho
/// and the LP step was on the trust-region boundary.
double trust_region_update(double rho, double delta, bool boundary_hit, const FslpConfig& cfg);

SolveReport solve(const StructuredNlp& nlp, const Vector& w_init, const FslpConfig& cfg);

}  // namespace fslp
