#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "fslp/model.hpp"

namespace fslp {

/// Dense LP
///
///   min  costᵀw
///   s.t. eq_matrix w = eq_rhs
///        ineq_matrix w <= ineq_rhs
///        lower <= w <= upper          (±infinity allowed)
struct BoxedLp {
  Vector cost;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix ineq_matrix;
  Vector ineq_rhs;
  Vector lower;
  Vector upper;

  Index n_w() const noexcept { return cost.size(); }
  Index n_eq() const noexcept { return eq_matrix.rows(); }
  Index n_ineq() const noexcept { return ineq_matrix.rows(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::IterationLimit;
  Vector solution;
  double objective = 0.0;
  std::int64_t pivot_count = 0;
};

/// PLP(w_l; ŵ, Δ): linearized equalities shifted by the mismatch δ_l,
///
///   δ_l + Cw + g(P_y ŵ) + G(w - ŵ) = 0,   Aw + b <= 0,   |w_i - ŵ_i| <= Δ for i in P_y.
///
/// With delta_l = 0 this is the trust-region LP at ŵ.
BoxedLp build_plp(const StructuredNlp& nlp, const JacobianSnapshot& snapshot,
                  const Vector& delta_l, double trust_radius);

BoxedLp build_trust_region_lp(const StructuredNlp& nlp, const JacobianSnapshot& snapshot,
                              double trust_radius);

/// Two-phase bounded-variable primal simplex. `pivot_limit` defaults to
/// 50 * (n_w + n_eq + n_ineq).
LpOutcome solve_lp(const BoxedLp& lp, std::optional<std::int64_t> pivot_limit = std::nullopt);

/// Full-precision text dump (hexadecimal floats) for reproducing LP instances.
void write_lp_dump(std::ostream& out, const BoxedLp& lp);
BoxedLp read_lp_dump(std::istream& in);

}  // namespace fslp
