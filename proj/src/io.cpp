#include "fslp/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fslp {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& doc, const std::string& key) {
  if (!doc.is_array()) throw SpecError("'" + key + "' must be an array of numbers");
  Vector v(static_cast<Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw SpecError("'" + key + "' must be an array of numbers");
    v[static_cast<Index>(i)] = doc[i].get<double>();
  }
  return v;
}

double number_from_json(const Json& doc, const std::string& key) {
  if (!doc.is_number()) throw SpecError("'" + key + "' must be a number");
  return doc.get<double>();
}

int int_from_json(const Json& doc, const std::string& key) {
  if (!doc.is_number_integer()) throw SpecError("'" + key + "' must be an integer");
  return doc.get<int>();
}

void reject_unknown_keys(const Json& doc, const std::set<std::string>& allowed, const char* what) {
  if (!doc.is_object()) throw SpecError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw SpecError(std::string(what) + ": unknown key '" + key + "'");
  }
}

std::string csv_flag(bool b) { return b ? "1" : "0"; }

}  // namespace

Json spec_to_json(const OcpSpec& spec) {
  Json doc;
  doc["system"] = to_string(spec.system);
  doc["N"] = spec.N;
  doc["x_start"] = vector_to_json(spec.x_start);
  doc["x_end"] = vector_to_json(spec.x_end);
  doc["u_min"] = vector_to_json(spec.u_min);
  doc["u_max"] = vector_to_json(spec.u_max);
  doc["x_min"] = vector_to_json(spec.x_min);
  doc["x_max"] = vector_to_json(spec.x_max);
  doc["mu0"] = vector_to_json(spec.mu0);
  doc["muN"] = vector_to_json(spec.muN);
  doc["v_max"] = spec.v_max ? Json(*spec.v_max) : Json(nullptr);
  doc["u_ball"] = spec.u_ball ? Json(*spec.u_ball) : Json(nullptr);
  if (spec.obstacle) {
    Json verts = Json::array();
    for (const auto& v : spec.obstacle->vertices) verts.push_back({v[0], v[1]});
    doc["obstacle"] = {{"vertices", verts}, {"r_safe", spec.obstacle->r_safe}};
  } else {
    doc["obstacle"] = nullptr;
  }
  doc["T_min"] = spec.T_min;
  doc["T_max"] = spec.T_max;
  return doc;
}

OcpSpec spec_from_json(const Json& doc) {
  reject_unknown_keys(doc,
                      {"system", "N", "x_start", "x_end", "u_min", "u_max", "x_min", "x_max", "mu0",
                       "muN", "v_max", "u_ball", "obstacle", "T_min", "T_max"},
                      "spec");
  OcpSpec spec;
  if (!doc.contains("system") || !doc["system"].is_string()) throw SpecError("spec: 'system' is required");
  spec.system = ocp_system_from_string(doc["system"].get<std::string>());
  if (doc.contains("N")) spec.N = int_from_json(doc["N"], "N");
  for (const char* key : {"x_start", "x_end", "u_min", "u_max", "x_min", "x_max"}) {
    if (!doc.contains(key)) throw SpecError(std::string("spec: '") + key + "' is required");
  }
  spec.x_start = vector_from_json(doc["x_start"], "x_start");
  spec.x_end = vector_from_json(doc["x_end"], "x_end");
  spec.u_min = vector_from_json(doc["u_min"], "u_min");
  spec.u_max = vector_from_json(doc["u_max"], "u_max");
  spec.x_min = vector_from_json(doc["x_min"], "x_min");
  spec.x_max = vector_from_json(doc["x_max"], "x_max");
  spec.mu0 = doc.contains("mu0") ? vector_from_json(doc["mu0"], "mu0") : Vector::Constant(spec.n_x(), 100.0);
  spec.muN = doc.contains("muN") ? vector_from_json(doc["muN"], "muN") : Vector::Constant(spec.n_x(), 100.0);
  if (doc.contains("v_max") && !doc["v_max"].is_null()) spec.v_max = number_from_json(doc["v_max"], "v_max");
  if (doc.contains("u_ball") && !doc["u_ball"].is_null()) spec.u_ball = number_from_json(doc["u_ball"], "u_ball");
  if (doc.contains("obstacle") && !doc["obstacle"].is_null()) {
    const Json& obs = doc["obstacle"];
    reject_unknown_keys(obs, {"vertices", "r_safe"}, "obstacle");
    if (!obs.contains("vertices") || !obs["vertices"].is_array()) {
      throw SpecError("obstacle: 'vertices' must be a list of [x, y] pairs");
    }
    Obstacle o;
    for (const Json& v : obs["vertices"]) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw SpecError("obstacle: 'vertices' must be a list of [x, y] pairs");
      }
      o.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    if (obs.contains("r_safe")) o.r_safe = number_from_json(obs["r_safe"], "r_safe");
    spec.obstacle = std::move(o);
  }
  if (doc.contains("T_min")) spec.T_min = number_from_json(doc["T_min"], "T_min");
  if (doc.contains("T_max")) spec.T_max = number_from_json(doc["T_max"], "T_max");
  spec.validate();
  return spec;
}

Json config_to_json(const FslpConfig& cfg) {
  Json doc;
  doc["delta0"] = cfg.delta0;
  doc["delta_max"] = cfg.delta_max;
  doc["shrink"] = cfg.shrink;
  doc["expand"] = cfg.expand;
  doc["accept_rho"] = cfg.accept_rho;
  doc["good_rho"] = cfg.good_rho;
  doc["model_tol"] = cfg.model_tol;
  doc["max_outer"] = cfg.max_outer;
  doc["aa_depth"] = cfg.aa_depth;
  doc["gamma_bound"] = cfg.aa.gamma_bound;
  doc["ls_rank_tol"] = cfg.aa.ls_rank_tol;
  doc["clip_py_only"] = cfg.aa.clip_py_only;
  doc["sigma_inner"] = cfg.inner().sigma_inner;
  doc["max_inner"] = cfg.inner().max_inner;
  doc["divergence_window"] = cfg.inner().divergence_window;
  doc["divergence_growth"] = cfg.inner().divergence_growth;
  return doc;
}

FslpConfig config_from_json(const Json& doc) {
  const std::set<std::string> keys{"delta0",      "delta_max",   "shrink",       "expand",
                                   "accept_rho",  "good_rho",    "model_tol",    "max_outer",
                                   "aa_depth",    "gamma_bound", "ls_rank_tol",  "clip_py_only",
                                   "sigma_inner", "max_inner",   "divergence_window",
                                   "divergence_growth"};
  reject_unknown_keys(doc, keys, "solver config");
  FslpConfig cfg;
  auto num = [&](const char* key, double& field) {
    if (doc.contains(key)) field = number_from_json(doc[key], key);
  };
  auto integer = [&](const char* key, int& field) {
    if (doc.contains(key)) field = int_from_json(doc[key], key);
  };
  num("delta0", cfg.delta0);
  num("delta_max", cfg.delta_max);
  num("shrink", cfg.shrink);
  num("expand", cfg.expand);
  num("accept_rho", cfg.accept_rho);
  num("good_rho", cfg.good_rho);
  num("model_tol", cfg.model_tol);
  integer("max_outer", cfg.max_outer);
  integer("aa_depth", cfg.aa_depth);
  num("gamma_bound", cfg.aa.gamma_bound);
  num("ls_rank_tol", cfg.aa.ls_rank_tol);
  if (doc.contains("clip_py_only")) {
    if (!doc["clip_py_only"].is_boolean()) throw SpecError("'clip_py_only' must be a boolean");
    cfg.aa.clip_py_only = doc["clip_py_only"].get<bool>();
  }
  num("sigma_inner", cfg.inner().sigma_inner);
  integer("max_inner", cfg.inner().max_inner);
  integer("divergence_window", cfg.inner().divergence_window);
  num("divergence_growth", cfg.inner().divergence_growth);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string("solver config: ") + e.what());
  }
  return cfg;
}

Json report_to_json(const SolveReport& report) {
  Json doc;
  doc["variant"] = report.variant;
  doc["status"] = to_string(report.status);
  doc["objective"] = report.objective;
  doc["n_outer"] = report.n_outer;
  doc["n_g_evals"] = report.counters.n_g_evals;
  doc["n_jac_evals"] = report.counters.n_jac_evals;
  doc["n_lp_solves"] = report.counters.n_lp_solves;
  doc["n_accepted"] = report.iterates.empty() ? 0 : report.iterates.size() - 1;
  doc["wall_seconds"] = report.wall_seconds;
  doc["w_star"] = vector_to_json(report.w_star);
  return doc;
}

void write_outer_csv(std::ostream& out, const SolveReport& report) {
  out << "k,objective,h,delta,model_decrease,inner_status,inner_iters,accepted\n";
  for (const OuterTraceRow& row : report.outer_trace) {
    out << row.k << ',' << format_double(row.objective) << ',' << format_double(row.h) << ','
        << format_double(row.delta) << ',' << format_double(row.model_decrease) << ','
        << (row.inner_status ? to_string(*row.inner_status) : "none") << ',' << row.inner_iters
        << ',' << csv_flag(row.accepted) << '\n';
  }
}

void write_inner_csv(std::ostream& out, const SolveReport& report, bool anderson_columns) {
  out << "outer_iter,inner_iter,h,dist_to_wbar,dist_to_what";
  if (anderson_columns) out << ",gamma_inf_norm,memory_cols,clipped";
  out << '\n';
  for (const OuterTraceRow& outer : report.outer_trace) {
    for (const InnerTraceRow& row : outer.inner_trace) {
      out << outer.k << ',' << row.l << ',' << format_double(row.h) << ','
          << format_double(row.dist_to_wbar) << ',' << format_double(row.dist_to_what);
      if (anderson_columns) {
        out << ',' << format_double(row.gamma_inf_norm) << ',' << row.memory_cols << ','
            << csv_flag(row.clipped);
      }
      out << '\n';
    }
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SpecError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fslp
