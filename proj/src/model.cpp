#include "fslp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fslp {

namespace {

Index first_non_finite(const Eigen::Ref<const Matrix>& m) {
  for (Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i])) return i;
  }
  return -1;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

StructuredNlp::StructuredNlp(Vector c, Matrix C, Matrix A, Vector b,
                             std::vector<Index> py_indices, ResidualFn g, JacobianFn g_jacobian)
    : c_(std::move(c)),
      C_(std::move(C)),
      A_(std::move(A)),
      b_(std::move(b)),
      py_(std::move(py_indices)),
      g_(std::move(g)),
      jac_(std::move(g_jacobian)) {
  const Index nw = c_.size();
  require(nw > 0, "StructuredNlp: empty decision vector");
  require(C_.cols() == nw, "StructuredNlp: C has " + std::to_string(C_.cols()) +
                               " columns, expected " + std::to_string(nw));
  require(A_.cols() == nw || A_.rows() == 0, "StructuredNlp: A column count mismatch");
  if (A_.rows() == 0) A_.resize(0, nw);
  require(b_.size() == A_.rows(), "StructuredNlp: b length differs from A row count");
  require(static_cast<bool>(g_) && static_cast<bool>(jac_), "StructuredNlp: missing callback");

  std::vector<Index> sorted = py_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "StructuredNlp: py_indices contain duplicates");
  require(sorted.empty() || (sorted.front() >= 0 && sorted.back() < nw),
          "StructuredNlp: py_indices out of range");

  require(first_non_finite(c_) < 0, "StructuredNlp: non-finite cost");
  require(first_non_finite(C_) < 0, "StructuredNlp: non-finite C");
  require(first_non_finite(A_) < 0, "StructuredNlp: non-finite A");
  require(first_non_finite(b_) < 0, "StructuredNlp: non-finite b");
  for (Index i = 0; i < A_.rows(); ++i) {
    require(A_.row(i).cwiseAbs().maxCoeff() > 0.0,
            "StructuredNlp: inequality row " + std::to_string(i) + " is zero");
  }
}

Vector StructuredNlp::select(const Vector& w) const {
  Vector y(n_y());
  for (Index i = 0; i < n_y(); ++i) y[i] = w[py_[static_cast<std::size_t>(i)]];
  return y;
}

Vector StructuredNlp::eval_g(const Vector& y, EvalCounters& counters) const {
  ++counters.n_g_evals;
  Vector out = g_(y);
  if (out.size() != n_g()) {
    throw std::invalid_argument("g returned " + std::to_string(out.size()) + " entries, expected " +
                                std::to_string(n_g()));
  }
  if (const Index bad = first_non_finite(out); bad >= 0) {
    throw EvaluationError("g produced a non-finite value at row " + std::to_string(bad), bad);
  }
  return out;
}

Matrix StructuredNlp::eval_jacobian(const Vector& y, EvalCounters& counters) const {
  ++counters.n_jac_evals;
  Matrix out = jac_(y);
  if (out.rows() != n_g() || out.cols() != n_y()) {
    throw std::invalid_argument("g_jacobian returned a " + std::to_string(out.rows()) + "x" +
                                std::to_string(out.cols()) + " matrix");
  }
  if (const Index bad = first_non_finite(out); bad >= 0) {
    throw EvaluationError("g_jacobian produced a non-finite entry", bad);
  }
  return out;
}

JacobianSnapshot make_snapshot(const StructuredNlp& nlp, const Vector& w_hat,
                               EvalCounters& counters) {
  Vector g_hat = nlp.eval_g(nlp.select(w_hat), counters);
  return make_snapshot(nlp, w_hat, std::move(g_hat), counters);
}

JacobianSnapshot make_snapshot(const StructuredNlp& nlp, const Vector& w_hat, Vector g_at_point,
                               EvalCounters& counters) {
  if (w_hat.size() != nlp.n_w()) throw std::invalid_argument("make_snapshot: bad w length");
  if (g_at_point.size() != nlp.n_g()) throw std::invalid_argument("make_snapshot: bad g length");
  const Matrix jy = nlp.eval_jacobian(nlp.select(w_hat), counters);
  JacobianSnapshot snap;
  snap.G = Matrix::Zero(nlp.n_g(), nlp.n_w());
  const auto& py = nlp.py_indices();
  for (std::size_t j = 0; j < py.size(); ++j) snap.G.col(py[j]) = jy.col(static_cast<Index>(j));
  snap.linearization_point = w_hat;
  snap.g_at_point = std::move(g_at_point);
  return snap;
}

Vector eval_equality_residual(const StructuredNlp& nlp, const Vector& w, EvalCounters& counters) {
  if (w.size() != nlp.n_w()) throw std::invalid_argument("eval_equality_residual: bad w length");
  return nlp.C() * w + nlp.eval_g(nlp.select(w), counters);
}

double infeasibility_from(const StructuredNlp& nlp, const Vector& w, const Vector& g_value) {
  double eq = 0.0;
  if (nlp.n_g() > 0) eq = (nlp.C() * w + g_value).lpNorm<Eigen::Infinity>();
  double ineq = 0.0;
  if (nlp.n_b() > 0) ineq = std::max(0.0, (nlp.A() * w + nlp.b()).maxCoeff());
  return eq + ineq;
}

double infeasibility(const StructuredNlp& nlp, const Vector& w, EvalCounters& counters) {
  if (w.size() != nlp.n_w()) throw std::invalid_argument("infeasibility: bad w length");
  return infeasibility_from(nlp, w, nlp.eval_g(nlp.select(w), counters));
}

std::vector<Index> active_set(const StructuredNlp& nlp, const Vector& w, double tol) {
  std::vector<Index> active;
  if (nlp.n_b() == 0) return active;
  const Vector slack = nlp.A() * w + nlp.b();
  for (Index i = 0; i < slack.size(); ++i) {
    if (std::abs(slack[i]) <= tol) active.push_back(i);
  }
  return active;
}

Vector zero_order_mismatch_from(const JacobianSnapshot& snapshot, const Vector& w_l,
                                const Vector& g_value) {
  return g_value - snapshot.g_at_point - snapshot.G * (w_l - snapshot.linearization_point);
}

Vector zero_order_mismatch(const StructuredNlp& nlp, const Vector& w_l,
                           const JacobianSnapshot& snapshot, EvalCounters& counters) {
  if (w_l.size() != nlp.n_w()) throw std::invalid_argument("zero_order_mismatch: bad w length");
  return zero_order_mismatch_from(snapshot, w_l, nlp.eval_g(nlp.select(w_l), counters));
}

Index numerical_rank(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const double largest = m.colwise().norm().maxCoeff();
  if (largest == 0.0) return 0;
  const Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const Matrix& r = qr.matrixQR();
  Index rank = 0;
  for (Index i = 0; i < std::min(r.rows(), r.cols()); ++i) {
    if (std::abs(r(i, i)) > rel_tol * largest) ++rank;
  }
  return rank;
}

const char* to_string(SolutionClass cls) {
  switch (cls) {
    case SolutionClass::FullyDetermined: return "FullyDetermined";
    case SolutionClass::UnderDetermined: return "UnderDetermined";
    case SolutionClass::LicqFails: return "LicqFails";
  }
  return "?";
}

SolutionClass classify_solution(const StructuredNlp& nlp, const Vector& w_star, double tol,
                                EvalCounters& counters) {
  const Vector y = nlp.select(w_star);
  const Vector g_value = nlp.eval_g(y, counters);
  if (infeasibility_from(nlp, w_star, g_value) > tol) {
    throw std::invalid_argument("classify_solution: point is not feasible");
  }
  const JacobianSnapshot snap = make_snapshot(nlp, w_star, g_value, counters);
  const std::vector<Index> active = active_set(nlp, w_star, tol);

  const Index rows = nlp.n_g() + static_cast<Index>(active.size());
  Matrix stack(rows, nlp.n_w());
  stack.topRows(nlp.n_g()) = nlp.C() + snap.G;
  for (std::size_t i = 0; i < active.size(); ++i) {
    stack.row(nlp.n_g() + static_cast<Index>(i)) = nlp.A().row(active[i]);
  }
  if (rows > nlp.n_w()) return SolutionClass::LicqFails;
  if (numerical_rank(stack) < rows) return SolutionClass::LicqFails;
  return rows == nlp.n_w() ? SolutionClass::FullyDetermined : SolutionClass::UnderDetermined;
}

}  // namespace fslp
