#pragma once

#include <deque>
#include <vector>

#include "fslp/inner.hpp"

namespace fslp {

/// Difference histories for AA(d). Columns are kept newest first:
///   E = (w_l - w_{l-1}, ..., w_{l-m+1} - w_{l-m})
///   F = (r_{l+1} - r_l, ..., r_{l-m+2} - r_{l-m+1})
class AndersonMemory {
 public:
  AndersonMemory(int depth, Vector w0, Vector r1);

  /// Appends w_l - last_w and r_next - last_r, dropping the oldest column
  /// beyond the depth, then stores w_l and r_next as the new references.
  void push(const Vector& w_l, const Vector& r_next);

  int depth() const noexcept { return depth_; }
  int columns() const noexcept { return static_cast<int>(w_diffs_.size()); }
  const std::deque<Vector>& w_diffs() const noexcept { return w_diffs_; }
  const std::deque<Vector>& r_diffs() const noexcept { return r_diffs_; }
  const Vector& last_w() const noexcept { return last_w_; }
  const Vector& last_r() const noexcept { return last_r_; }

  Matrix E() const;
  Matrix F() const;

 private:
  int depth_;
  std::deque<Vector> w_diffs_;
  std::deque<Vector> r_diffs_;
  Vector last_w_;
  Vector last_r_;
};

struct AaConfig {
  int depth = 1;
  /// Safeguard bound on ||γ||_inf. Zero is accepted as a sentinel that forces
  /// every step back to the plain fixed-point update.
  double gamma_bound = 1e4;
  double ls_rank_tol = 1e-12;
  /// Clip only P_y-selected coordinates (the trust-region box) instead of all of w.
  bool clip_py_only = true;
  InnerConfig inner;

  void validate() const;
};

/// argmin_γ ||r_next - F γ||_2 by column-pivoted QR. Columns below the rank
/// tolerance get weight zero; an out-of-bound result is replaced by zero.
Vector aa_gamma(const Vector& r_next, const Matrix& F, const AaConfig& cfg);

/// Depth-one closed form <r_next, r_next - r_prev> / ||r_next - r_prev||^2.
double aa_gamma_d1(const Vector& r_next, const Vector& r_prev);

/// Projects w onto the trust-region box around ŵ. Returns true if any coordinate moved.
bool clip_to_trust_region(Vector& w, const Vector& w_hat, double trust_radius,
                          const std::vector<Index>& py_indices, bool py_only = true);

/// Π( w_l + r_next - (E + F) γ ).
Vector aa_update(const Vector& w_l, const Vector& r_next, const AndersonMemory& memory,
                 const Vector& gamma, const Vector& w_hat, double trust_radius,
                 const std::vector<Index>& py_indices, bool py_only = true);

InnerResult aa_feasibility_iterations(const StructuredNlp& nlp, const Vector& w_hat,
                                      const Vector& w_bar, const JacobianSnapshot& snapshot,
                                      double trust_radius, const AaConfig& cfg,
                                      EvalCounters& counters);

}  // namespace fslp
