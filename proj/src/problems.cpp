#include "fslp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <tuple>

namespace fslp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void spec_error(const std::string& msg) { throw SpecError("OcpSpec: " + msg); }

}  // namespace

ToyProblem circle_problem(bool with_inequality) {
  auto g = [](const Vector& y) {
    Vector out(1);
    out[0] = y.squaredNorm() - 1.0;
    return out;
  };
  auto jac = [](const Vector& y) {
    Matrix out(1, 2);
    out << 2.0 * y[0], 2.0 * y[1];
    return out;
  };
  Vector c(2);
  Matrix A(0, 2);
  Vector b(0);
  Vector optimum(2);
  if (with_inequality) {
    c << -1.0, -1.0;
    A.resize(1, 2);
    A << -1.0, 1.0;
    b = Vector::Zero(1);
    optimum << std::sqrt(0.5), std::sqrt(0.5);
  } else {
    c << -1.0, 0.0;
    optimum << 1.0, 0.0;
  }
  StructuredNlp nlp(c, Matrix::Zero(1, 2), A, b, {0, 1}, g, jac);
  // (0, 1) violates w2 - w1 <= 0, so the constrained variant starts at (1, 0)
  Vector start(2);
  if (with_inequality) start << 1.0, 0.0;
  else start << 0.0, 1.0;
  return {std::move(nlp), start, optimum};
}

const char* to_string(OcpSystem system) {
  return system == OcpSystem::DoubleIntegrator1D ? "DoubleIntegrator1D" : "PointMass2D";
}

OcpSystem ocp_system_from_string(const std::string& name) {
  if (name == "DoubleIntegrator1D") return OcpSystem::DoubleIntegrator1D;
  if (name == "PointMass2D") return OcpSystem::PointMass2D;
  throw SpecError("unknown system '" + name + "'");
}

void OcpSpec::validate() const {
  if (N < 2) spec_error("N must be >= 2");
  const Index nx = n_x(), nu = n_u();
  auto check_len = [](const Vector& v, Index n, const char* name) {
    if (v.size() != n) spec_error(std::string(name) + " must have length " + std::to_string(n));
  };
  check_len(x_start, nx, "x_start");
  check_len(x_end, nx, "x_end");
  check_len(u_min, nu, "u_min");
  check_len(u_max, nu, "u_max");
  check_len(x_min, nx, "x_min");
  check_len(x_max, nx, "x_max");
  check_len(mu0, nx, "mu0");
  check_len(muN, nx, "muN");
  if ((mu0.array() <= 0.0).any() || (muN.array() <= 0.0).any()) {
    spec_error("slack penalties mu0, muN must be strictly positive");
  }
  if ((u_min.array() > u_max.array()).any()) spec_error("u_min exceeds u_max");
  if ((x_min.array() > x_max.array()).any()) spec_error("x_min exceeds x_max");
  if (!(T_min > 0.0) || !(T_max >= T_min)) spec_error("require 0 < T_min <= T_max");
  if (system == OcpSystem::DoubleIntegrator1D) {
    if (v_max) spec_error("v_max is linear for DoubleIntegrator1D; use the velocity state box instead");
    if (u_ball) spec_error("u_ball is linear for DoubleIntegrator1D; use u_min/u_max instead");
    if (obstacle) spec_error("obstacles need a planar system (PointMass2D)");
  }
  if (v_max && !(*v_max > 0.0)) spec_error("v_max must be > 0");
  if (u_ball && !(*u_ball > 0.0)) spec_error("u_ball must be > 0");
  if (obstacle) {
    if (obstacle->vertices.size() < 3) spec_error("obstacle needs at least 3 vertices");
    if (!(obstacle->r_safe >= 0.0)) spec_error("r_safe must be >= 0");
  }
  for (const Vector* x : {&x_start, &x_end}) {
    if (((x->array() < x_min.array()) || (x->array() > x_max.array())).any()) {
      spec_error("endpoint outside the state box");
    }
  }
}

OcpLayout ocp_layout(const OcpSpec& spec) {
  OcpLayout l;
  l.n_x = spec.n_x();
  l.n_u = spec.n_u();
  l.N = spec.N;
  Index at = 0;
  l.x0 = at;
  at += static_cast<Index>(spec.N + 1) * l.n_x;
  l.u0 = at;
  at += static_cast<Index>(spec.N) * l.n_u;
  l.s0 = at;
  at += l.n_x;
  l.sN = at;
  at += l.n_x;
  l.T = at++;
  if (spec.v_max) {
    l.vel_slack = at;
    at += spec.N;
  }
  if (spec.u_ball) {
    l.ball_slack = at;
    at += spec.N;
  }
  if (spec.obstacle) {
    l.hyperplane = at;
    at += 3 * static_cast<Index>(spec.N);
    l.obs_slack = at;
    at += spec.N;
  }
  l.n_w = at;
  return l;
}

namespace {

struct Rk4Result {
  Vector x_next;
  Matrix jac;  // columns: x (n_x), u (n_u), step (1)
};

/// Continuous dynamics ẋ = Ac x + Bc u of the (multi-axis) double integrator.
std::pair<Matrix, Matrix> double_integrator(const OcpSpec& spec) {
  const Index np = spec.n_pos(), nx = spec.n_x();
  Matrix Ac = Matrix::Zero(nx, nx);
  Matrix Bc = Matrix::Zero(nx, np);
  Ac.topRightCorner(np, np).setIdentity();
  Bc.bottomRows(np).setIdentity();
  return {Ac, Bc};
}

Rk4Result rk4_with_sensitivity(const Matrix& Ac, const Matrix& Bc, const Vector& x,
                               const Vector& u, double h) {
  const Index nx = x.size(), nu = u.size(), np = nx + nu + 1;
  auto f = [&](const Vector& z) -> Vector { return Ac * z + Bc * u; };
  // d f(z(p), u) / dp for a given dz/dp
  Matrix du = Matrix::Zero(nx, np);
  du.block(0, nx, nx, nu) = Bc;
  auto df = [&](const Matrix& dz) -> Matrix { return Ac * dz + du; };
  Matrix dx = Matrix::Zero(nx, np);
  dx.leftCols(nx).setIdentity();

  const Vector k1 = f(x);
  const Matrix dk1 = df(dx);
  const Vector z2 = x + 0.5 * h * k1;
  Matrix dz2 = dx + 0.5 * h * dk1;
  dz2.col(np - 1) += 0.5 * k1;
  const Vector k2 = f(z2);
  const Matrix dk2 = df(dz2);
  const Vector z3 = x + 0.5 * h * k2;
  Matrix dz3 = dx + 0.5 * h * dk2;
  dz3.col(np - 1) += 0.5 * k2;
  const Vector k3 = f(z3);
  const Matrix dk3 = df(dz3);
  const Vector z4 = x + h * k3;
  Matrix dz4 = dx + h * dk3;
  dz4.col(np - 1) += k3;
  const Vector k4 = f(z4);
  const Matrix dk4 = df(dz4);

  const Vector s = k1 + 2.0 * k2 + 2.0 * k3 + k4;
  Rk4Result out;
  out.x_next = x + (h / 6.0) * s;
  out.jac = dx + (h / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4);
  out.jac.col(np - 1) += s / 6.0;
  return out;
}

/// Evaluates C-free residual blocks of the OCP from a full-length w.
class OcpResidual {
 public:
  explicit OcpResidual(const OcpSpec& spec) : spec_(spec), layout_(ocp_layout(spec)) {
    std::tie(Ac_, Bc_) = double_integrator(spec);
    n_g_ = static_cast<Index>(spec.N) * spec.n_x();
    if (spec.v_max) n_g_ += spec.N;
    if (spec.u_ball) n_g_ += spec.N;
    if (spec.obstacle) n_g_ += spec.N;
  }

  Index n_g() const { return n_g_; }
  const OcpLayout& layout() const { return layout_; }

  Vector value(const Vector& w) const {
    Vector g(n_g_);
    Index row = 0;
    const int nx = spec_.n_x(), nu = spec_.n_u(), np = spec_.n_pos();
    const double step = w[layout_.T] / spec_.N;
    for (int k = 0; k < spec_.N; ++k) {
      const Rk4Result r = rk4_with_sensitivity(Ac_, Bc_, w.segment(layout_.x(k), nx),
                                               w.segment(layout_.u(k), nu), step);
      g.segment(row, nx) = -r.x_next;
      row += nx;
    }
    if (spec_.v_max) {
      for (int k = 0; k < spec_.N; ++k) {
        g[row++] = w.segment(layout_.x(k, np), np).squaredNorm() - *spec_.v_max * *spec_.v_max;
      }
    }
    if (spec_.u_ball) {
      for (int k = 0; k < spec_.N; ++k) {
        g[row++] = w.segment(layout_.u(k), nu).squaredNorm() - *spec_.u_ball * *spec_.u_ball;
      }
    }
    if (spec_.obstacle) {
      for (int k = 0; k < spec_.N; ++k) {
        const Index hp = layout_.hyperplane + 3 * k;
        g[row++] = w[hp] * w[layout_.x(k, 0)] + w[hp + 1] * w[layout_.x(k, 1)] + w[hp + 2] +
                   spec_.obstacle->r_safe;
      }
    }
    return g;
  }

  Matrix jacobian(const Vector& w) const {
    Matrix J = Matrix::Zero(n_g_, layout_.n_w);
    Index row = 0;
    const int nx = spec_.n_x(), nu = spec_.n_u(), np = spec_.n_pos();
    const double step = w[layout_.T] / spec_.N;
    for (int k = 0; k < spec_.N; ++k) {
      const Rk4Result r = rk4_with_sensitivity(Ac_, Bc_, w.segment(layout_.x(k), nx),
                                               w.segment(layout_.u(k), nu), step);
      J.block(row, layout_.x(k), nx, nx) = -r.jac.leftCols(nx);
      J.block(row, layout_.u(k), nx, nu) = -r.jac.middleCols(nx, nu);
      J.block(row, layout_.T, nx, 1) = -r.jac.rightCols(1) / spec_.N;
      row += nx;
    }
    if (spec_.v_max) {
      for (int k = 0; k < spec_.N; ++k, ++row) {
        J.block(row, layout_.x(k, np), 1, np) = 2.0 * w.segment(layout_.x(k, np), np).transpose();
      }
    }
    if (spec_.u_ball) {
      for (int k = 0; k < spec_.N; ++k, ++row) {
        J.block(row, layout_.u(k), 1, nu) = 2.0 * w.segment(layout_.u(k), nu).transpose();
      }
    }
    if (spec_.obstacle) {
      for (int k = 0; k < spec_.N; ++k, ++row) {
        const Index hp = layout_.hyperplane + 3 * k;
        J(row, layout_.x(k, 0)) = w[hp];
        J(row, layout_.x(k, 1)) = w[hp + 1];
        J(row, hp) = w[layout_.x(k, 0)];
        J(row, hp + 1) = w[layout_.x(k, 1)];
        J(row, hp + 2) = 1.0;
      }
    }
    return J;
  }

 private:
  OcpSpec spec_;
  OcpLayout layout_;
  Matrix Ac_, Bc_;
  Index n_g_ = 0;
};

std::vector<Index> ocp_py_indices(const OcpLayout& l) {
  std::vector<Index> py;
  for (Index i = l.x0; i < l.s0; ++i) py.push_back(i);  // states and controls
  py.push_back(l.T);
  if (l.hyperplane >= 0) {
    for (Index i = l.hyperplane; i < l.obs_slack; ++i) py.push_back(i);
  }
  return py;
}

/// Convex hull (counter-clockwise, Andrew's monotone chain).
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Closest point of a convex polygon to p; nullopt if p lies inside or on it.
std::optional<std::array<double, 2>> closest_on_polygon(
    const std::vector<std::array<double, 2>>& hull, const std::array<double, 2>& p) {
  bool inside = true;
  double best = kInf;
  std::array<double, 2> best_pt{};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    const double ex = b[0] - a[0], ey = b[1] - a[1];
    if (ex * (p[1] - a[1]) - ey * (p[0] - a[0]) < 0.0) inside = false;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const std::array<double, 2> q{a[0] + t * ex, a[1] + t * ey};
    const double d = std::hypot(p[0] - q[0], p[1] - q[1]);
    if (d < best) {
      best = d;
      best_pt = q;
    }
  }
  if (inside) return std::nullopt;
  return best_pt;
}

}  // namespace

Vector rk4_step(const OcpSpec& spec, const Vector& x, const Vector& u, double step) {
  const auto [Ac, Bc] = double_integrator(spec);
  return rk4_with_sensitivity(Ac, Bc, x, u, step).x_next;
}

StructuredNlp build_p2p_ocp(const OcpSpec& spec) {
  spec.validate();
  const auto residual = std::make_shared<const OcpResidual>(spec);
  const OcpLayout& L = residual->layout();
  const int nx = spec.n_x(), nu = spec.n_u();
  const Index n_w = L.n_w;
  const Index n_g = residual->n_g();

  Vector c = Vector::Zero(n_w);
  c[L.T] = 1.0;
  c.segment(L.s0, nx) = spec.mu0;
  c.segment(L.sN, nx) = spec.muN;

  Matrix C = Matrix::Zero(n_g, n_w);
  Index row = 0;
  for (int k = 0; k < spec.N; ++k, row += nx) C.block(row, L.x(k + 1), nx, nx).setIdentity();
  if (spec.v_max) {
    for (int k = 0; k < spec.N; ++k) C(row++, L.vel_slack + k) = 1.0;
  }
  if (spec.u_ball) {
    for (int k = 0; k < spec.N; ++k) C(row++, L.ball_slack + k) = 1.0;
  }
  if (spec.obstacle) {
    for (int k = 0; k < spec.N; ++k) C(row++, L.obs_slack + k) = 1.0;
  }

  // inequality rows a w + b <= 0
  std::vector<Eigen::RowVectorXd> dense_rows;
  std::vector<double> offsets;
  auto add_row = [&](std::initializer_list<std::pair<Index, double>> entries, double offset) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n_w);
    for (const auto& [idx, val] : entries) r[idx] += val;
    dense_rows.push_back(std::move(r));
    offsets.push_back(offset);
  };
  auto add_box = [&](Index idx, double lo, double hi) {
    if (hi < kInf) add_row({{idx, 1.0}}, -hi);
    if (lo > -kInf) add_row({{idx, -1.0}}, lo);
  };
  for (int k = 0; k <= spec.N; ++k) {
    for (int i = 0; i < nx; ++i) add_box(L.x(k, i), spec.x_min[i], spec.x_max[i]);
  }
  for (int k = 0; k < spec.N; ++k) {
    for (int i = 0; i < nu; ++i) add_box(L.u(k, i), spec.u_min[i], spec.u_max[i]);
  }
  for (int i = 0; i < nx; ++i) {
    // -s <= x - x̄ <= s at both ends
    add_row({{L.x(0, i), 1.0}, {L.s0 + i, -1.0}}, -spec.x_start[i]);
    add_row({{L.x(0, i), -1.0}, {L.s0 + i, -1.0}}, spec.x_start[i]);
    add_row({{L.x(spec.N, i), 1.0}, {L.sN + i, -1.0}}, -spec.x_end[i]);
    add_row({{L.x(spec.N, i), -1.0}, {L.sN + i, -1.0}}, spec.x_end[i]);
  }
  add_box(L.T, spec.T_min, spec.T_max);
  for (const Index block : {L.vel_slack, L.ball_slack, L.obs_slack}) {
    if (block < 0) continue;
    for (int k = 0; k < spec.N; ++k) add_row({{block + k, -1.0}}, 0.0);
  }
  if (spec.obstacle) {
    for (int k = 0; k < spec.N; ++k) {
      const Index hp = L.hyperplane + 3 * k;
      for (const auto& v : spec.obstacle->vertices) {
        // n_aᵀυ + n_b >= 0
        add_row({{hp, -v[0]}, {hp + 1, -v[1]}, {hp + 2, -1.0}}, 0.0);
      }
      for (int j = 0; j < 3; ++j) add_box(hp + j, -1.0, 1.0);
    }
  }
  Matrix A(static_cast<Index>(dense_rows.size()), n_w);
  Vector b(static_cast<Index>(offsets.size()));
  for (std::size_t r = 0; r < dense_rows.size(); ++r) {
    A.row(static_cast<Index>(r)) = dense_rows[r];
    b[static_cast<Index>(r)] = offsets[r];
  }

  const std::vector<Index> py = ocp_py_indices(L);
  auto scatter = [py, n_w](const Vector& y) {
    Vector w = Vector::Zero(n_w);
    for (std::size_t j = 0; j < py.size(); ++j) w[py[j]] = y[static_cast<Index>(j)];
    return w;
  };
  auto g = [residual, scatter](const Vector& y) { return residual->value(scatter(y)); };
  auto jac = [residual, scatter, py](const Vector& y) {
    const Matrix full = residual->jacobian(scatter(y));
    Matrix out(full.rows(), static_cast<Index>(py.size()));
    for (std::size_t j = 0; j < py.size(); ++j) out.col(static_cast<Index>(j)) = full.col(py[j]);
    return out;
  };
  return StructuredNlp(std::move(c), std::move(C), std::move(A), std::move(b), py, g, jac);
}

Vector init_feasible(const OcpSpec& spec, const Vector& u_const, double T0) {
  spec.validate();
  const OcpLayout L = ocp_layout(spec);
  const int nx = spec.n_x(), nu = spec.n_u(), np = spec.n_pos();
  if (u_const.size() != nu) spec_error("u_const has wrong length");
  if (((u_const.array() < spec.u_min.array()) || (u_const.array() > spec.u_max.array())).any()) {
    spec_error("u_const violates the control bounds");
  }
  if (T0 < spec.T_min || T0 > spec.T_max) spec_error("T0 outside [T_min, T_max]");
  if (spec.u_ball && u_const.squaredNorm() > *spec.u_ball * *spec.u_ball) {
    spec_error("u_const violates the control ball");
  }

  Vector w = Vector::Zero(L.n_w);
  w[L.T] = T0;
  Vector x = spec.x_start;
  for (int k = 0; k <= spec.N; ++k) {
    if (((x.array() < spec.x_min.array()) || (x.array() > spec.x_max.array())).any()) {
      spec_error("rollout leaves the state box at stage " + std::to_string(k));
    }
    w.segment(L.x(k), nx) = x;
    if (k < spec.N) {
      w.segment(L.u(k), nu) = u_const;
      x = rk4_step(spec, x, u_const, T0 / spec.N);
    }
  }
  w.segment(L.s0, nx).setZero();
  w.segment(L.sN, nx) = (w.segment(L.x(spec.N), nx) - spec.x_end).cwiseAbs();

  if (spec.v_max) {
    for (int k = 0; k < spec.N; ++k) {
      const double s = *spec.v_max * *spec.v_max - w.segment(L.x(k, np), np).squaredNorm();
      if (s < 0.0) spec_error("rollout exceeds v_max at stage " + std::to_string(k));
      w[L.vel_slack + k] = s;
    }
  }
  if (spec.u_ball) {
    for (int k = 0; k < spec.N; ++k) {
      w[L.ball_slack + k] = *spec.u_ball * *spec.u_ball - u_const.squaredNorm();
    }
  }
  if (spec.obstacle) {
    const auto hull = convex_hull(spec.obstacle->vertices);
    for (int k = 0; k < spec.N; ++k) {
      const std::array<double, 2> p{w[L.x(k, 0)], w[L.x(k, 1)]};
      const auto q = closest_on_polygon(hull, p);
      if (!q) spec_error("stage " + std::to_string(k) + " lies inside the obstacle");
      const double dist = std::hypot((*q)[0] - p[0], (*q)[1] - p[1]);
      const double ux = ((*q)[0] - p[0]) / dist, uy = ((*q)[1] - p[1]) / dist;
      const double uq = ux * (*q)[0] + uy * (*q)[1];
      // largest scale with ||(n_a, n_b)||_inf <= 1
      const double scale = 1.0 / std::max({std::abs(ux), std::abs(uy), std::abs(uq)});
      const double margin = scale * dist - spec.obstacle->r_safe;
      if (margin < 0.0) {
        spec_error("no separating hyperplane with margin r_safe at stage " + std::to_string(k));
      }
      const Index hp = L.hyperplane + 3 * k;
      w[hp] = scale * ux;
      w[hp + 1] = scale * uy;
      w[hp + 2] = -scale * uq;
      w[L.obs_slack + k] = -(w[hp] * p[0] + w[hp + 1] * p[1] + w[hp + 2] + spec.obstacle->r_safe);
    }
  }

  const StructuredNlp nlp = build_p2p_ocp(spec);
  EvalCounters scratch;
  const double h = infeasibility(nlp, w, scratch);
  if (h > 1e-10) spec_error("feasible initialization failed, h = " + std::to_string(h));
  return w;
}

std::vector<OcpSpec> perturbed_test_set(const OcpSpec& spec, int count, double magnitude,
                                        std::uint64_t seed) {
  spec.validate();
  if (count < 0) spec_error("count must be >= 0");
  if (!(magnitude >= 0.0)) spec_error("magnitude must be >= 0");
  Lcg64 rng(seed);
  std::vector<OcpSpec> out;
  out.reserve(static_cast<std::size_t>(count));
  const int np = spec.n_pos();
  for (int i = 0; i < count; ++i) {
    OcpSpec s = spec;
    for (Vector* x : {&s.x_start, &s.x_end}) {
      for (int j = 0; j < np; ++j) (*x)[j] += rng.uniform(-magnitude, magnitude);
    }
    for (const Vector* x : {&s.x_start, &s.x_end}) {
      if (((x->array() < s.x_min.array()) || (x->array() > s.x_max.array())).any()) {
        spec_error("perturbation moves an endpoint outside the state box (problem " +
                   std::to_string(i) + ")");
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

double analytic_min_time(const OcpSpec& spec) {
  spec.validate();
  const int np = spec.n_pos();
  if (spec.obstacle) throw SpecError("analytic_min_time: obstacles are not supported");
  if (!spec.x_start.tail(np).isZero(0.0) || !spec.x_end.tail(np).isZero(0.0)) {
    throw SpecError("analytic_min_time: only rest-to-rest motions are supported");
  }
  const Vector disp = spec.x_end.head(np) - spec.x_start.head(np);
  const double d = disp.norm();
  if (d == 0.0) return 0.0;
  const Vector dir = disp / d;

  double accel = 0.0;
  double speed = kInf;
  if (spec.u_ball) {
    accel = *spec.u_ball;
    for (int i = 0; i < np; ++i) {
      const double need = accel * std::abs(dir[i]);
      if (need > std::min(-spec.u_min[i], spec.u_max[i]) + 1e-12) {
        throw SpecError("analytic_min_time: control box binds along the motion direction");
      }
    }
  } else {
    int axis = -1;
    for (int i = 0; i < np; ++i) {
      if (std::abs(dir[i]) == 1.0) axis = i;
    }
    if (axis < 0) throw SpecError("analytic_min_time: box controls need an axis-aligned motion");
    accel = std::min(-spec.u_min[axis], spec.u_max[axis]);
  }
  for (int i = 0; i < np; ++i) {
    if (dir[i] != 0.0) speed = std::min(speed, std::min(-spec.x_min[np + i], spec.x_max[np + i]) / std::abs(dir[i]));
  }
  if (spec.v_max) speed = std::min(speed, *spec.v_max);
  if (!(accel > 0.0)) throw SpecError("analytic_min_time: zero acceleration bound");

  if (std::sqrt(d * accel) <= speed) return 2.0 * std::sqrt(d / accel);
  return d / speed + speed / accel;
}

OcpSpec double_integrator_spec(int N, double distance, double accel,
                               std::optional<double> speed_limit) {
  OcpSpec s;
  s.N = N;
  s.system = OcpSystem::DoubleIntegrator1D;
  s.x_start = Vector::Zero(2);
  s.x_end = Vector::Zero(2);
  s.x_end[0] = distance;
  s.u_min = Vector::Constant(1, -accel);
  s.u_max = Vector::Constant(1, accel);
  const double vlim = speed_limit.value_or(10.0);
  s.x_min = Vector(2);
  s.x_max = Vector(2);
  s.x_min << -10.0, -vlim;
  s.x_max << 10.0, vlim;
  s.mu0 = Vector::Constant(2, 100.0);
  s.muN = Vector::Constant(2, 100.0);
  s.T_min = 0.1;
  s.T_max = 20.0;
  return s;
}

OcpSpec point_mass_spec(bool speed_bound, int N) {
  OcpSpec s;
  s.N = N;
  s.system = OcpSystem::PointMass2D;
  s.x_start = Vector::Zero(4);
  s.x_end = Vector::Zero(4);
  s.x_end << 1.0, 0.5, 0.0, 0.0;
  s.u_min = Vector::Constant(2, -1.0);
  s.u_max = Vector::Constant(2, 1.0);
  s.x_min = Vector(4);
  s.x_max = Vector(4);
  s.x_min << -2.0, -2.0, -2.0, -2.0;
  s.x_max << 2.0, 2.0, 2.0, 2.0;
  s.mu0 = Vector::Constant(4, 100.0);
  s.muN = Vector::Constant(4, 100.0);
  if (speed_bound) s.v_max = 0.6;
  s.T_min = 0.1;
  s.T_max = 20.0;
  return s;
}

OcpStart default_start(const OcpSpec& spec) {
  OcpStart start;
  start.u_const = Vector::Zero(spec.n_u());
  start.T0 = 1.0;
  return start;
}

}  // namespace fslp
