// Dense two-phase primal simplex with explicit variable bounds.
//
// Standard form after preprocessing:
//
//   [ E  0  ±I_e ] [x]   [e]
//   [ A  I  ±I_a ] [s] = [r],   lower <= x <= upper,  s >= 0,  artificials >= 0
//                  [a]
//
// Inequality rows with a single nonzero are folded into the bounds of x
// before the tableau is built. The tableau B^-1 [E 0; A I] is updated by
// rank-one pivots and recomputed from scratch every kRefactorInterval pivots.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "fslp/lp.hpp"

namespace fslp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr int kRefactorInterval = 100;

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

class Simplex {
 public:
  Simplex(Matrix full, Vector rhs, Vector lo, Vector hi, Vector x0, std::vector<Index> basis,
          std::int64_t pivot_limit, Index bland_threshold, Index first_artificial)
      : full_(std::move(full)),
        rhs_(std::move(rhs)),
        lo_(std::move(lo)),
        hi_(std::move(hi)),
        x_(std::move(x0)),
        basis_(std::move(basis)),
        pivot_limit_(pivot_limit),
        bland_threshold_(bland_threshold),
        first_artificial_(first_artificial) {
    row_of_.assign(static_cast<std::size_t>(full_.cols()), -1);
    for (std::size_t r = 0; r < basis_.size(); ++r) row_of_[basis_[r]] = static_cast<Index>(r);
  }

  PhaseResult run(const Vector& cost) {
    cost_ = cost;
    dtol_ = 1e-9 * std::max(1.0, cost_.lpNorm<Eigen::Infinity>());
    if (T_.rows() != static_cast<Index>(basis_.size()) || T_.cols() != full_.cols()) {
      refactor();
    } else {
      reprice();
    }
    bool use_bland = false;
    Index degenerate_run = 0;

    for (;;) {
      if (pivots_ >= pivot_limit_) return PhaseResult::IterationLimit;

      Index q = -1;
      double dir = 0.0;
      double best = 0.0;
      for (Index j = 0; j < full_.cols(); ++j) {
        if (row_of_[j] >= 0 || lo_[j] == hi_[j]) continue;
        const double dj = d_[j];
        double score = 0.0;
        double dj_dir = 0.0;
        if (dj < -dtol_ && x_[j] < hi_[j]) {
          score = -dj;
          dj_dir = 1.0;
        } else if (dj > dtol_ && x_[j] > lo_[j]) {
          score = dj;
          dj_dir = -1.0;
        } else {
          continue;
        }
        if (use_bland) {
          q = j;
          dir = dj_dir;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
          dir = dj_dir;
        }
      }
      if (q < 0) {
        if (since_refactor_ > 0) recompute_basic_values();
        return PhaseResult::Optimal;
      }

      // ratio test
      double t_best = kInf;
      Index leave_row = -1;
      bool leave_at_lower = false;
      for (Index i = 0; i < static_cast<Index>(basis_.size()); ++i) {
        const double alpha = dir * T_(i, q);
        const Index bi = basis_[static_cast<std::size_t>(i)];
        double limit = kInf;
        bool to_lower = false;
        if (alpha > kPivotTol && lo_[bi] > -kInf) {
          limit = std::max(0.0, (x_[bi] - lo_[bi]) / alpha);
          to_lower = true;
        } else if (alpha < -kPivotTol && hi_[bi] < kInf) {
          limit = std::max(0.0, (hi_[bi] - x_[bi]) / -alpha);
        } else {
          continue;
        }
        const bool better = limit < t_best - 1e-12 * (1.0 + std::abs(limit));
        const bool tie = !better && limit <= t_best + 1e-12 * (1.0 + std::abs(limit));
        if (better || (tie && leave_row >= 0 && bi < basis_[static_cast<std::size_t>(leave_row)])) {
          t_best = limit;
          leave_row = i;
          leave_at_lower = to_lower;
        }
      }
      const double flip = hi_[q] - lo_[q];
      ++pivots_;

      if (flip <= t_best) {
        if (!(flip < kInf)) return PhaseResult::Unbounded;
        // bound flip, no basis change
        for (Index i = 0; i < static_cast<Index>(basis_.size()); ++i) {
          x_[basis_[static_cast<std::size_t>(i)]] -= dir * flip * T_(i, q);
        }
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        degenerate_run = 0;
        continue;
      }

      const double t = t_best;
      for (Index i = 0; i < static_cast<Index>(basis_.size()); ++i) {
        x_[basis_[static_cast<std::size_t>(i)]] -= dir * t * T_(i, q);
      }
      x_[q] += dir * t;
      const Index leaving = basis_[static_cast<std::size_t>(leave_row)];
      x_[leaving] = leave_at_lower ? lo_[leaving] : hi_[leaving];
      pivot(leave_row, q);

      if (t <= kDegenerateStep) {
        if (++degenerate_run > bland_threshold_) use_bland = true;
      } else {
        degenerate_run = 0;
      }
      if (++since_refactor_ >= kRefactorInterval) refactor();
    }
  }

  std::int64_t pivots() const noexcept { return pivots_; }
  const Vector& x() const noexcept { return x_; }
  Vector& hi() noexcept { return hi_; }
  bool is_basic(Index j) const { return row_of_[j] >= 0; }

 private:
  // Basic columns other than the leaving one stay unit vectors, and nonbasic
  // fixed columns can never enter again, so both are left untouched.
  void pivot(Index p, Index q) {
    const double piv = T_(p, q);
    const Vector col = T_.col(q);
    const Index leaving = basis_[static_cast<std::size_t>(p)];
    const double dq = d_[q];
    for (Index j = 0; j < T_.cols(); ++j) {
      if (j != leaving && (row_of_[j] >= 0 || lo_[j] == hi_[j])) continue;
      const double rj = T_(p, j) / piv;
      if (rj == 0.0) continue;
      T_.col(j) -= rj * col;
      T_(p, j) = rj;
      d_[j] -= dq * rj;
    }
    d_[q] = 0.0;
    // an artificial that leaves the basis is not needed again
    if (leaving >= first_artificial_) hi_[leaving] = lo_[leaving];

    row_of_[leaving] = -1;
    row_of_[q] = p;
    basis_[static_cast<std::size_t>(p)] = q;
  }

  Matrix basis_matrix() const {
    const Index m = static_cast<Index>(basis_.size());
    Matrix B(m, m);
    for (Index r = 0; r < m; ++r) B.col(r) = full_.col(basis_[static_cast<std::size_t>(r)]);
    return B;
  }

  // A basis made of slack/artificial columns is diagonal; skip the LU then.
  std::optional<Vector> diagonal_basis(const Matrix& B) const {
    Vector diag = B.diagonal();
    if ((diag.array() == 0.0).any()) return std::nullopt;
    if ((B - Matrix(diag.asDiagonal())).cwiseAbs().maxCoeff() != 0.0) return std::nullopt;
    return diag;
  }

  Vector nonbasic_rhs() const {
    Vector xn = x_;
    for (const Index bi : basis_) xn[bi] = 0.0;
    return rhs_ - full_ * xn;
  }

  void set_basic_values(const Vector& xb) {
    for (std::size_t r = 0; r < basis_.size(); ++r) x_[basis_[r]] = xb[static_cast<Index>(r)];
  }

  void recompute_basic_values() {
    if (basis_.empty()) return;
    const Matrix B = basis_matrix();
    if (const auto diag = diagonal_basis(B)) {
      set_basic_values(nonbasic_rhs().cwiseQuotient(*diag));
    } else {
      set_basic_values(Eigen::PartialPivLU<Matrix>(B).solve(nonbasic_rhs()));
    }
  }

  void reprice() {
    Vector cb(static_cast<Index>(basis_.size()));
    for (std::size_t r = 0; r < basis_.size(); ++r) cb[static_cast<Index>(r)] = cost_[basis_[r]];
    d_ = cost_ - T_.transpose() * cb;
    for (const Index bi : basis_) d_[bi] = 0.0;
  }

  void refactor() {
    since_refactor_ = 0;
    const Index m = static_cast<Index>(basis_.size());
    if (m == 0) {
      T_.resize(0, full_.cols());
      d_ = cost_;
      return;
    }
    const Matrix B = basis_matrix();
    if (const auto diag = diagonal_basis(B)) {
      T_ = diag->cwiseInverse().asDiagonal() * full_;
      set_basic_values(nonbasic_rhs().cwiseQuotient(*diag));
    } else {
      const Eigen::PartialPivLU<Matrix> lu(B);
      T_ = lu.solve(full_);
      set_basic_values(lu.solve(nonbasic_rhs()));
    }
    reprice();
  }

  Matrix full_;
  Vector rhs_;
  Vector lo_, hi_;
  Vector x_;
  std::vector<Index> basis_;
  std::vector<Index> row_of_;
  Matrix T_;
  Vector d_;
  Vector cost_;
  double dtol_ = 1e-9;
  std::int64_t pivots_ = 0;
  int since_refactor_ = 0;
  std::int64_t pivot_limit_;
  Index bland_threshold_;
  Index first_artificial_;
};

void validate(const BoxedLp& lp) {
  const Index n = lp.n_w();
  auto fail = [](const char* msg) { throw std::invalid_argument(std::string("solve_lp: ") + msg); };
  if (lp.eq_matrix.cols() != n && lp.n_eq() > 0) fail("eq_matrix column count");
  if (lp.ineq_matrix.cols() != n && lp.n_ineq() > 0) fail("ineq_matrix column count");
  if (lp.eq_rhs.size() != lp.n_eq()) fail("eq_rhs length");
  if (lp.ineq_rhs.size() != lp.n_ineq()) fail("ineq_rhs length");
  if (lp.lower.size() != n || lp.upper.size() != n) fail("bound length");
  for (Index j = 0; j < n; ++j) {
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] > lp.upper[j]) {
      fail("lower > upper");
    }
  }
}

}  // namespace

LpOutcome solve_lp(const BoxedLp& lp, std::optional<std::int64_t> pivot_limit) {
  validate(lp);
  const Index n = lp.n_w();
  const Index m_eq = lp.n_eq();
  const std::int64_t limit = pivot_limit.value_or(50 * (n + m_eq + lp.n_ineq()));

  LpOutcome out;
  out.solution = Vector::Zero(n);

  const double rhs_scale = 1.0 + std::max(lp.eq_rhs.size() ? lp.eq_rhs.lpNorm<Eigen::Infinity>() : 0.0,
                                          lp.ineq_rhs.size() ? lp.ineq_rhs.lpNorm<Eigen::Infinity>() : 0.0);
  const double feas_tol = 1e-9 * rhs_scale;

  // fold singleton inequality rows into bounds
  Vector lo = lp.lower;
  Vector hi = lp.upper;
  std::vector<Index> general;
  for (Index r = 0; r < lp.n_ineq(); ++r) {
    Index nz = 0, col = -1;
    for (Index j = 0; j < n; ++j) {
      if (lp.ineq_matrix(r, j) != 0.0) {
        ++nz;
        col = j;
      }
    }
    if (nz == 0) {
      if (lp.ineq_rhs[r] < -feas_tol) {
        out.status = LpStatus::Infeasible;
        return out;
      }
    } else if (nz == 1) {
      const double a = lp.ineq_matrix(r, col);
      const double bound = lp.ineq_rhs[r] / a;
      if (a > 0.0) hi[col] = std::min(hi[col], bound);
      else lo[col] = std::max(lo[col], bound);
    } else {
      general.push_back(r);
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) {
      if (lo[j] - hi[j] > feas_tol) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      hi[j] = lo[j];
    }
  }

  const Index m_gen = static_cast<Index>(general.size());
  const Index m = m_eq + m_gen;
  const Index slack0 = n;
  const Index art0 = n + m_gen;
  const Index ncols = n + m_gen + m;

  Matrix full = Matrix::Zero(m, ncols);
  Vector rhs(m);
  if (m_eq > 0) {
    full.block(0, 0, m_eq, n) = lp.eq_matrix;
    rhs.head(m_eq) = lp.eq_rhs;
  }
  for (Index k = 0; k < m_gen; ++k) {
    full.block(m_eq + k, 0, 1, n) = lp.ineq_matrix.row(general[static_cast<std::size_t>(k)]);
    full(m_eq + k, slack0 + k) = 1.0;
    rhs[m_eq + k] = lp.ineq_rhs[general[static_cast<std::size_t>(k)]];
  }

  Vector lo_all(ncols), hi_all(ncols), x0 = Vector::Zero(ncols);
  lo_all.head(n) = lo;
  hi_all.head(n) = hi;
  lo_all.segment(slack0, m_gen).setZero();
  hi_all.segment(slack0, m_gen).setConstant(kInf);
  lo_all.segment(art0, m).setZero();
  hi_all.segment(art0, m).setZero();
  for (Index j = 0; j < n; ++j) {
    if (lo[j] > -kInf) x0[j] = lo[j];
    else if (hi[j] < kInf) x0[j] = hi[j];
  }

  std::vector<Index> basis(static_cast<std::size_t>(m));
  Vector phase1_cost = Vector::Zero(ncols);
  const Vector residual = rhs - full.leftCols(n) * x0.head(n);
  for (Index r = 0; r < m; ++r) {
    const bool is_ineq = r >= m_eq;
    if (is_ineq && residual[r] >= 0.0) {
      const Index s = slack0 + (r - m_eq);
      basis[static_cast<std::size_t>(r)] = s;
      x0[s] = residual[r];
      continue;
    }
    const Index a = art0 + r;
    full(r, a) = residual[r] >= 0.0 ? 1.0 : -1.0;
    hi_all[a] = kInf;
    x0[a] = std::abs(residual[r]);
    phase1_cost[a] = 1.0;
    basis[static_cast<std::size_t>(r)] = a;
  }

  Simplex simplex(std::move(full), std::move(rhs), std::move(lo_all), std::move(hi_all),
                  std::move(x0), std::move(basis), limit, 3 * (n + m_eq), art0);

  const PhaseResult p1 = simplex.run(phase1_cost);
  out.pivot_count = simplex.pivots();
  if (p1 == PhaseResult::IterationLimit) return out;
  const double infeas = phase1_cost.dot(simplex.x());
  if (infeas > feas_tol) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // artificials are frozen at zero for phase 2
  for (Index j = art0; j < ncols; ++j) simplex.hi()[j] = 0.0;
  Vector phase2_cost = Vector::Zero(ncols);
  phase2_cost.head(n) = lp.cost;
  const PhaseResult p2 = simplex.run(phase2_cost);
  out.pivot_count = simplex.pivots();
  if (p2 == PhaseResult::IterationLimit) return out;
  if (p2 == PhaseResult::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.solution = simplex.x().head(n);
  for (Index j = 0; j < n; ++j) out.solution[j] = std::clamp(out.solution[j], lo[j], hi[j]);
  out.objective = lp.cost.dot(out.solution);
  return out;
}

}  // namespace fslp
