#include "fslp/bench.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fslp/io.hpp"

namespace fslp {

Variant parse_variant(const std::string& token) {
  if (token == "none" || token == "fslp") return {"FSLP", 0};
  std::string digits;
  if (token.rfind("aa:", 0) == 0) digits = token.substr(3);
  else if (token.rfind("aa", 0) == 0) digits = token.substr(2);
  else throw std::invalid_argument("unknown acceleration '" + token + "' (use none, aa1, aa5, aa15 or aa:<d>)");
  if (digits.empty() || digits.size() > 4 ||
      !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    throw std::invalid_argument("bad Anderson depth in '" + token + "'");
  }
  const int depth = std::stoi(digits);
  if (depth < 1) throw std::invalid_argument("Anderson depth must be >= 1 in '" + token + "'");
  return {"AA(" + std::to_string(depth) + ")", depth};
}

std::vector<Variant> parse_variant_list(const std::string& list) {
  std::vector<Variant> out;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    Variant v = parse_variant(token);
    for (const Variant& seen : out) {
      if (seen.aa_depth == v.aa_depth) throw std::invalid_argument("variant listed twice: " + v.label);
    }
    out.push_back(std::move(v));
  }
  if (out.empty()) throw std::invalid_argument("empty variant list");
  return out;
}

Suite suite_by_name(const std::string& name) {
  if (name == "pointmass2d") return {name, point_mass_spec(true), 0.01};
  if (name == "pointmass2d-free") return {name, point_mass_spec(false), 0.01};
  if (name == "di1d") return {name, double_integrator_spec(21), 0.01};
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<std::string> suite_names() { return {"pointmass2d", "pointmass2d-free", "di1d"}; }

void audit_report(const StructuredNlp& nlp, const SolveReport& report, ProblemRun& run) {
  EvalCounters scratch;
  run.max_accepted_h = 0.0;
  for (const Vector& w : report.iterates) {
    run.max_accepted_h = std::max(run.max_accepted_h, infeasibility(nlp, w, scratch));
  }
  run.max_accepted_ratio = 0.0;
  run.n_accepted = 0;
  for (const OuterTraceRow& row : report.outer_trace) {
    if (!row.accepted) continue;
    ++run.n_accepted;
    const double ratio =
        row.lp_step_norm > 0.0 ? row.inner_trace.back().dist_to_wbar / row.lp_step_norm : 0.0;
    run.max_accepted_ratio = std::max(run.max_accepted_ratio, ratio);
  }
}

std::vector<ProblemRun> run_benchmark(const std::vector<OcpSpec>& problems,
                                      const std::vector<Variant>& variants,
                                      const FslpConfig& base_config) {
  struct Prepared {
    StructuredNlp nlp;
    Vector w0;
  };
  std::vector<Prepared> prepared;
  prepared.reserve(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    try {
      const OcpStart start = default_start(problems[i]);
      prepared.push_back({build_p2p_ocp(problems[i]), init_feasible(problems[i], start.u_const, start.T0)});
    } catch (const SpecError& e) {
      throw SpecError("problem " + std::to_string(i) + ": " + e.what());
    }
  }

  std::vector<ProblemRun> runs;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    for (const Variant& v : variants) {
      FslpConfig cfg = base_config;
      cfg.aa_depth = v.aa_depth;
      const SolveReport report = solve(prepared[i].nlp, prepared[i].w0, cfg);
      ProblemRun run;
      run.problem_id = static_cast<int>(i);
      run.variant = v.label;
      run.status = report.status;
      run.n_con = report.counters.n_g_evals;
      run.n_iter = report.n_outer;
      run.objective = report.objective;
      run.wall_seconds = report.wall_seconds;
      audit_report(prepared[i].nlp, report, run);
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

std::vector<BenchmarkRow> aggregate(const std::vector<ProblemRun>& runs,
                                    const std::vector<Variant>& variants) {
  std::vector<BenchmarkRow> rows;
  for (const Variant& v : variants) {
    BenchmarkRow row;
    row.variant = v.label;
    for (const ProblemRun& run : runs) {
      if (run.variant != v.label) continue;
      ++row.problem_count;
      if (run.status != SolveStatus::Optimal) continue;
      ++row.success_count;
      row.mean_n_con += static_cast<double>(run.n_con);
      row.mean_n_iter += run.n_iter;
      row.mean_wall_seconds += run.wall_seconds;
    }
    if (row.success_count > 0) {
      row.mean_n_con /= row.success_count;
      row.mean_n_iter /= row.success_count;
      row.mean_wall_seconds /= row.success_count;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "variant,mean_n_con,mean_n_iter,mean_wall_seconds,success_count,problem_count\n";
  for (const BenchmarkRow& r : rows) {
    out << r.variant << ',' << format_double(r.mean_n_con) << ',' << format_double(r.mean_n_iter)
        << ',' << format_double(r.mean_wall_seconds) << ',' << r.success_count << ','
        << r.problem_count << '\n';
  }
}

void write_long_csv(std::ostream& out, const std::vector<ProblemRun>& runs) {
  out << "problem_id,variant,status,n_con,n_iter,objective,max_accepted_h,max_accepted_ratio,"
         "n_accepted,wall_seconds\n";
  for (const ProblemRun& r : runs) {
    out << r.problem_id << ',' << r.variant << ',' << to_string(r.status) << ',' << r.n_con << ','
        << r.n_iter << ',' << format_double(r.objective) << ',' << format_double(r.max_accepted_h)
        << ',' << format_double(r.max_accepted_ratio) << ',' << r.n_accepted << ','
        << format_double(r.wall_seconds) << '\n';
  }
}

}  // namespace fslp
