#pragma once

#include <cstdint>
#include <vector>

#include "fslp/lp.hpp"
#include "fslp/model.hpp"

namespace fslp {

struct InnerConfig {
  double sigma_inner = 1e-6;
  int max_inner = 50;
  int divergence_window = 2;
  double divergence_growth = 1.0;

  void validate() const;
};

enum class InnerStatus { Converged, Diverged, RatioViolated, LpFailed, IterLimit };

const char* to_string(InnerStatus status);

/// One loop entry of the feasibility iterations. The Anderson fields describe
/// the update that produced `w` and stay at their defaults for plain iterations.
struct InnerTraceRow {
  int l = 0;
  double h = 0.0;
  double dist_to_wbar = 0.0;
  double dist_to_what = 0.0;
  Vector w;
  double gamma_inf_norm = 0.0;
  int memory_cols = 0;
  bool clipped = false;
};

struct InnerResult {
  InnerStatus status = InnerStatus::IterLimit;
  Vector w_tilde;
  Vector g_at_tilde;  // g(P_y w̃), reused by the outer loop as the next snapshot value
  std::vector<InnerTraceRow> iterates_trace;
  std::int64_t g_evals_used = 0;
};

/// ||w̄ - w|| / ||w̄ - ŵ||, with 0/0 read as 0.
double projection_ratio(const Vector& w_bar, const Vector& w, const Vector& w_hat);

/// Plain zero-order feasibility iterations: w_0 = w̄, w_{l+1} = PLP solution at w_l.
InnerResult feasibility_iterations(const StructuredNlp& nlp, const Vector& w_hat,
                                   const Vector& w_bar, const JacobianSnapshot& snapshot,
                                   double trust_radius, const InnerConfig& cfg,
                                   EvalCounters& counters);

/// ρ_l = ||w_{l+1} - w_ref|| / ||w_l - w_ref|| over the trace; entries whose
/// denominator is below 1e-14 are skipped and a trailing zero-numerator rate is dropped.
std::vector<double> contraction_estimate(const std::vector<InnerTraceRow>& trace,
                                         const Vector& w_ref);

namespace detail {

/// Shared bookkeeping for the plain and accelerated loops.
class InnerLoopGuard {
 public:
  InnerLoopGuard(const InnerConfig& cfg, const StructuredNlp& nlp, const Vector& w_hat,
                 double trust_radius)
      : cfg_(cfg), nlp_(nlp), w_hat_(w_hat), trust_radius_(trust_radius) {}

  /// Records h of the latest loop entry; true when the divergence heuristic fires.
  bool diverging(double h, const Vector& w);

 private:
  const InnerConfig& cfg_;
  const StructuredNlp& nlp_;
  const Vector& w_hat_;
  double trust_radius_;
  double last_h_ = -1.0;
  int growth_run_ = 0;
};

}  // namespace detail

}  // namespace fslp
