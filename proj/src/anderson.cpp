#include "fslp/anderson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace fslp {

AndersonMemory::AndersonMemory(int depth, Vector w0, Vector r1)
    : depth_(depth), last_w_(std::move(w0)), last_r_(std::move(r1)) {
  if (depth < 1) throw std::invalid_argument("AndersonMemory: depth must be >= 1");
  if (last_w_.size() != last_r_.size()) throw std::invalid_argument("AndersonMemory: size mismatch");
}

void AndersonMemory::push(const Vector& w_l, const Vector& r_next) {
  w_diffs_.push_front(w_l - last_w_);
  r_diffs_.push_front(r_next - last_r_);
  if (static_cast<int>(w_diffs_.size()) > depth_) {
    w_diffs_.pop_back();
    r_diffs_.pop_back();
  }
  last_w_ = w_l;
  last_r_ = r_next;
}

namespace {

Matrix stack_columns(const std::deque<Vector>& cols, Index rows) {
  Matrix m(rows, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Index>(j)) = cols[j];
  return m;
}

}  // namespace

Matrix AndersonMemory::E() const { return stack_columns(w_diffs_, last_w_.size()); }
Matrix AndersonMemory::F() const { return stack_columns(r_diffs_, last_r_.size()); }

void AaConfig::validate() const {
  if (depth < 1) throw std::invalid_argument("AA depth must be >= 1");
  if (!(gamma_bound == 0.0 || gamma_bound > 1.0)) {
    throw std::invalid_argument("gamma_bound must exceed 1 (or be the 0 sentinel)");
  }
  if (!(ls_rank_tol >= 0.0)) throw std::invalid_argument("ls_rank_tol must be >= 0");
  inner.validate();
}

Vector aa_gamma(const Vector& r_next, const Matrix& F, const AaConfig& cfg) {
  if (F.cols() < 1) throw std::invalid_argument("aa_gamma: empty history");
  if (F.rows() != r_next.size()) throw std::invalid_argument("aa_gamma: size mismatch");
  Eigen::ColPivHouseholderQR<Matrix> qr(F);
  qr.setThreshold(cfg.ls_rank_tol);
  Vector gamma = Vector::Zero(F.cols());
  if (qr.rank() > 0) gamma = qr.solve(r_next);
  if (!gamma.allFinite() || gamma.lpNorm<Eigen::Infinity>() > cfg.gamma_bound) {
    gamma.setZero();
  }
  return gamma;
}

double aa_gamma_d1(const Vector& r_next, const Vector& r_prev) {
  const Vector diff = r_next - r_prev;
  const double nrm = diff.norm();
  if (nrm <= 1e-14) return 0.0;
  return r_next.dot(diff) / (nrm * nrm);
}

bool clip_to_trust_region(Vector& w, const Vector& w_hat, double trust_radius,
                          const std::vector<Index>& py_indices, bool py_only) {
  bool moved = false;
  auto clip = [&](Index i) {
    const double v = std::clamp(w[i], w_hat[i] - trust_radius, w_hat[i] + trust_radius);
    if (v != w[i]) {
      w[i] = v;
      moved = true;
    }
  };
  if (py_only) {
    for (const Index i : py_indices) clip(i);
  } else {
    for (Index i = 0; i < w.size(); ++i) clip(i);
  }
  return moved;
}

namespace {

Vector affine_step(const Vector& w_l, const Vector& r_next, const AndersonMemory& memory,
                   const Vector& gamma) {
  if (gamma.size() != memory.columns()) {
    throw std::invalid_argument("aa_update: gamma length differs from memory columns");
  }
  Vector w = w_l + r_next;
  for (int j = 0; j < memory.columns(); ++j) {
    const double gj = gamma[j];
    if (gj == 0.0) continue;
    w -= gj * (memory.w_diffs()[static_cast<std::size_t>(j)] +
               memory.r_diffs()[static_cast<std::size_t>(j)]);
  }
  return w;
}

}  // namespace

Vector aa_update(const Vector& w_l, const Vector& r_next, const AndersonMemory& memory,
                 const Vector& gamma, const Vector& w_hat, double trust_radius,
                 const std::vector<Index>& py_indices, bool py_only) {
  Vector w = affine_step(w_l, r_next, memory, gamma);
  clip_to_trust_region(w, w_hat, trust_radius, py_indices, py_only);
  return w;
}

InnerResult aa_feasibility_iterations(const StructuredNlp& nlp, const Vector& w_hat,
                                      const Vector& w_bar, const JacobianSnapshot& snapshot,
                                      double trust_radius, const AaConfig& cfg,
                                      EvalCounters& counters) {
  cfg.validate();
  const InnerConfig& icfg = cfg.inner;
  InnerResult result;
  detail::InnerLoopGuard guard(icfg, nlp, w_hat, trust_radius);

  // w_0 = ŵ, w_1 = w̄, r_1 = w_1 - w_0
  AndersonMemory memory(cfg.depth, w_hat, w_bar - w_hat);
  Vector w = w_bar;
  double gamma_norm = 0.0;
  int memory_cols = 0;
  bool clipped = false;

  for (int l = 1; l <= icfg.max_inner; ++l) {
    Vector g_value = nlp.eval_g(nlp.select(w), counters);
    ++result.g_evals_used;
    const double h = infeasibility_from(nlp, w, g_value);

    InnerTraceRow row;
    row.l = l;
    row.h = h;
    row.dist_to_wbar = (w - w_bar).norm();
    row.dist_to_what = (w - w_hat).norm();
    row.w = w;
    row.gamma_inf_norm = gamma_norm;
    row.memory_cols = memory_cols;
    row.clipped = clipped;
    result.iterates_trace.push_back(std::move(row));

    if (h <= icfg.sigma_inner) {
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

    const Vector r_next = lp.solution - w;
    memory.push(w, r_next);
    const Vector gamma = aa_gamma(r_next, memory.F(), cfg);

    Vector next = affine_step(w, r_next, memory, gamma);
    clipped = clip_to_trust_region(next, w_hat, trust_radius, nlp.py_indices(), cfg.clip_py_only);
    gamma_norm = gamma.lpNorm<Eigen::Infinity>();
    memory_cols = memory.columns();
    w = std::move(next);
  }
  result.status = InnerStatus::IterLimit;
  return result;
}

}  // namespace fslp
