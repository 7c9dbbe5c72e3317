#include "fslp/lp.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fslp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

BoxedLp build_plp(const StructuredNlp& nlp, const JacobianSnapshot& snapshot,
                  const Vector& delta_l, double trust_radius) {
  if (!(trust_radius > 0.0)) throw std::invalid_argument("build_plp: trust radius must be > 0");
  if (delta_l.size() != nlp.n_g()) throw std::invalid_argument("build_plp: delta has wrong length");
  if (snapshot.G.rows() != nlp.n_g() || snapshot.G.cols() != nlp.n_w() ||
      snapshot.linearization_point.size() != nlp.n_w() ||
      snapshot.g_at_point.size() != nlp.n_g()) {
    throw std::invalid_argument("build_plp: snapshot does not match the problem dimensions");
  }
  const Vector& w_hat = snapshot.linearization_point;
  constexpr double inf = std::numeric_limits<double>::infinity();

  BoxedLp lp;
  lp.cost = nlp.c();
  lp.eq_matrix = nlp.C() + snapshot.G;
  lp.eq_rhs = snapshot.G * w_hat - snapshot.g_at_point - delta_l;
  lp.ineq_matrix = nlp.A();
  lp.ineq_rhs = -nlp.b();
  lp.lower = Vector::Constant(nlp.n_w(), -inf);
  lp.upper = Vector::Constant(nlp.n_w(), inf);
  for (const Index i : nlp.py_indices()) {
    lp.lower[i] = w_hat[i] - trust_radius;
    lp.upper[i] = w_hat[i] + trust_radius;
  }
  return lp;
}

BoxedLp build_trust_region_lp(const StructuredNlp& nlp, const JacobianSnapshot& snapshot,
                              double trust_radius) {
  return build_plp(nlp, snapshot, Vector::Zero(nlp.n_g()), trust_radius);
}

namespace {

void write_hex(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  out << buf;
}

void write_vector(std::ostream& out, const char* tag, const Vector& v) {
  out << tag;
  for (Index i = 0; i < v.size(); ++i) {
    out << ' ';
    write_hex(out, v[i]);
  }
  out << '\n';
}

void write_matrix(std::ostream& out, const char* tag, const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    out << tag;
    for (Index c = 0; c < m.cols(); ++c) {
      out << ' ';
      write_hex(out, m(r, c));
    }
    out << '\n';
  }
}

double parse_hex(const std::string& tok) {
  // strtod understands both hex floats and inf/-inf
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw std::runtime_error("lp dump: bad number '" + tok + "'");
  return v;
}

Vector read_vector(std::istream& in, const char* tag, Index n) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(std::string("lp dump: missing ") + tag);
  std::istringstream ls(line);
  std::string head;
  ls >> head;
  if (head != tag) throw std::runtime_error("lp dump: expected '" + std::string(tag) + "' got '" + head + "'");
  Vector v(n);
  std::string tok;
  for (Index i = 0; i < n; ++i) {
    if (!(ls >> tok)) throw std::runtime_error(std::string("lp dump: short row ") + tag);
    v[i] = parse_hex(tok);
  }
  return v;
}

}  // namespace

void write_lp_dump(std::ostream& out, const BoxedLp& lp) {
  out << "boxedlp 1\n";
  out << "dims " << lp.n_w() << ' ' << lp.n_eq() << ' ' << lp.n_ineq() << '\n';
  write_vector(out, "cost", lp.cost);
  write_vector(out, "lower", lp.lower);
  write_vector(out, "upper", lp.upper);
  write_matrix(out, "eq", lp.eq_matrix);
  write_vector(out, "eq_rhs", lp.eq_rhs);
  write_matrix(out, "ineq", lp.ineq_matrix);
  write_vector(out, "ineq_rhs", lp.ineq_rhs);
}

BoxedLp read_lp_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "boxedlp 1") throw std::runtime_error("lp dump: bad header");
  if (!std::getline(in, line)) throw std::runtime_error("lp dump: missing dims");
  std::istringstream ds(line);
  std::string tag;
  Index nw = 0, neq = 0, nin = 0;
  ds >> tag >> nw >> neq >> nin;
  if (tag != "dims" || !ds) throw std::runtime_error("lp dump: bad dims line");

  BoxedLp lp;
  lp.cost = read_vector(in, "cost", nw);
  lp.lower = read_vector(in, "lower", nw);
  lp.upper = read_vector(in, "upper", nw);
  lp.eq_matrix.resize(neq, nw);
  for (Index r = 0; r < neq; ++r) lp.eq_matrix.row(r) = read_vector(in, "eq", nw).transpose();
  lp.eq_rhs = read_vector(in, "eq_rhs", neq);
  lp.ineq_matrix.resize(nin, nw);
  for (Index r = 0; r < nin; ++r) lp.ineq_matrix.row(r) = read_vector(in, "ineq", nw).transpose();
  lp.ineq_rhs = read_vector(in, "ineq_rhs", nin);
  return lp;
}

}  // namespace fslp
