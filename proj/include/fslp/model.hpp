#pragma once

// Structured NLP in the form
//
//   min  cᵀw   s.t.  C w + g(P_y w) = 0,   A w + b <= 0
//
// where P_y selects the variables entering g. Evaluation goes through
// EvalCounters so that solvers can report exact callback counts.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fslp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Thrown when g or its Jacobian returns a non-finite entry.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Index index)
      : std::runtime_error(what), index_(index) {}
  Index index() const noexcept { return index_; }

 private:
  Index index_;
};

struct EvalCounters {
  std::int64_t n_g_evals = 0;
  std::int64_t n_jac_evals = 0;
  std::int64_t n_lp_solves = 0;
};

class StructuredNlp {
 public:
  StructuredNlp(Vector c, Matrix C, Matrix A, Vector b, std::vector<Index> py_indices,
                ResidualFn g, JacobianFn g_jacobian);

  Index n_w() const noexcept { return c_.size(); }
  Index n_g() const noexcept { return C_.rows(); }
  Index n_b() const noexcept { return A_.rows(); }
  Index n_y() const noexcept { return static_cast<Index>(py_.size()); }

  const Vector& c() const noexcept { return c_; }
  const Matrix& C() const noexcept { return C_; }
  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  const std::vector<Index>& py_indices() const noexcept { return py_; }

  /// P_y w
  Vector select(const Vector& w) const;

  /// Raw callbacks with finiteness checks and counting.
  Vector eval_g(const Vector& y, EvalCounters& counters) const;
  Matrix eval_jacobian(const Vector& y, EvalCounters& counters) const;

  /// Unchecked access for tests that compare against finite differences.
  const ResidualFn& g() const noexcept { return g_; }
  const JacobianFn& g_jacobian() const noexcept { return jac_; }

 private:
  Vector c_;
  Matrix C_;
  Matrix A_;
  Vector b_;
  std::vector<Index> py_;
  ResidualFn g_;
  JacobianFn jac_;
};

/// Jacobian of w -> C w + g(P_y w) frozen at a linearization point.
/// `G` holds only the g part, expanded to full width (zero outside P_y).
struct JacobianSnapshot {
  Matrix G;
  Vector linearization_point;
  Vector g_at_point;
};

JacobianSnapshot make_snapshot(const StructuredNlp& nlp, const Vector& w_hat,
                               EvalCounters& counters);

/// Variant reusing an already evaluated g(P_y ŵ); costs one Jacobian call only.
JacobianSnapshot make_snapshot(const StructuredNlp& nlp, const Vector& w_hat,
                               Vector g_at_point, EvalCounters& counters);

Vector eval_equality_residual(const StructuredNlp& nlp, const Vector& w, EvalCounters& counters);

/// h(w) = ||Cw + g(P_y w)||_inf + ||[Aw + b]^+||_inf
double infeasibility(const StructuredNlp& nlp, const Vector& w, EvalCounters& counters);

/// Same measure from an already evaluated g(P_y w). Does not touch the counters.
double infeasibility_from(const StructuredNlp& nlp, const Vector& w, const Vector& g_value);

std::vector<Index> active_set(const StructuredNlp& nlp, const Vector& w, double tol = 1e-8);

/// δ(w_l, ŵ) = g(P_y w_l) - g(P_y ŵ) - G (w_l - ŵ). One g evaluation.
Vector zero_order_mismatch(const StructuredNlp& nlp, const Vector& w_l,
                           const JacobianSnapshot& snapshot, EvalCounters& counters);

Vector zero_order_mismatch_from(const JacobianSnapshot& snapshot, const Vector& w_l,
                                const Vector& g_value);

enum class SolutionClass { FullyDetermined, UnderDetermined, LicqFails };

const char* to_string(SolutionClass cls);

SolutionClass classify_solution(const StructuredNlp& nlp, const Vector& w_star, double tol,
                                EvalCounters& counters);

/// Numerical rank from column-pivoted QR with threshold rel_tol * (largest column norm).
Index numerical_rank(const Matrix& m, double rel_tol = 1e-10);

}  // namespace fslp
