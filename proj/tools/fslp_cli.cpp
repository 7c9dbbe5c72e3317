// fslp command-line front end: solve, bench, trace-rates.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fslp/bench.hpp"
#include "fslp/io.hpp"
#include "fslp/outer.hpp"
#include "fslp/problems.hpp"

namespace fs = std::filesystem;
using namespace fslp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

struct NamedProblem {
  StructuredNlp nlp;
  Vector start;
};

const std::vector<std::string> kProblemNames{"circle",      "circle-ineq", "di1d", "di1d-vmax",
                                             "pointmass2d", "pointmass2d-free"};

std::optional<OcpSpec> named_spec(const std::string& name) {
  if (name == "di1d") return double_integrator_spec(41);
  if (name == "di1d-vmax") return double_integrator_spec(40, 1.0, 1.0, 0.5);
  if (name == "pointmass2d") return point_mass_spec(true);
  if (name == "pointmass2d-free") return point_mass_spec(false);
  return std::nullopt;
}

NamedProblem problem_from_spec(const OcpSpec& spec) {
  const OcpStart start = default_start(spec);
  return {build_p2p_ocp(spec), init_feasible(spec, start.u_const, start.T0)};
}

NamedProblem named_problem(const std::string& name) {
  if (name == "circle" || name == "circle-ineq") {
    ToyProblem toy = circle_problem(name == "circle-ineq");
    return {std::move(toy.nlp), toy.feasible_start};
  }
  if (const auto spec = named_spec(name)) return problem_from_spec(*spec);
  throw std::invalid_argument("unknown problem '" + name + "'");
}

struct SolverFlags {
  std::string accel = "none";
  std::optional<double> delta0;
  std::optional<double> sigma_inner;
  std::optional<int> max_outer;
  std::string config_path;

  void add_to(CLI::App* app, bool with_accel) {
    if (with_accel) {
      app->add_option("--accel", accel, "none | aa1 | aa5 | aa15 | aa:<d>")->capture_default_str();
    }
    app->add_option("--delta0", delta0, "initial trust-region radius");
    app->add_option("--sigma-inner", sigma_inner, "inner feasibility tolerance");
    app->add_option("--max-outer", max_outer, "outer iteration limit");
    app->add_option("--config", config_path,
                    "JSON file {\"solver\": {...}, \"problem\": {...}}; flags override it");
  }

  // Base config: config file, then explicit flags.
  FslpConfig config(const Json* solver_doc) const {
    FslpConfig cfg = solver_doc ? config_from_json(*solver_doc) : FslpConfig{};
    if (delta0) {
      cfg.delta0 = *delta0;
      cfg.delta_max = std::max(cfg.delta_max, *delta0);
    }
    if (sigma_inner) cfg.inner().sigma_inner = *sigma_inner;
    if (max_outer) cfg.max_outer = *max_outer;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("solver config: ") + e.what());
    }
    return cfg;
  }
};

struct ConfigFile {
  std::optional<Json> solver;
  std::optional<Json> problem;
};

ConfigFile load_config(const std::string& path) {
  ConfigFile out;
  if (path.empty()) return out;
  const Json doc = read_json_file(path);
  if (!doc.is_object()) throw SpecError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "solver") out.solver = value;
    else if (key == "problem") out.problem = value;
    else throw SpecError("config: unknown key '" + key + "'");
  }
  return out;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

int cmd_solve(const std::string& problem, const std::string& spec_path, const SolverFlags& flags,
              const std::string& out_dir) {
  const ConfigFile file = load_config(flags.config_path);
  FslpConfig cfg = flags.config(file.solver ? &*file.solver : nullptr);
  cfg.aa_depth = parse_variant(flags.accel).aa_depth;

  std::optional<NamedProblem> target;
  if (!spec_path.empty()) {
    target = problem_from_spec(spec_from_json(read_json_file(spec_path)));
  } else if (!problem.empty()) {
    target = named_problem(problem);
  } else if (file.problem) {
    target = problem_from_spec(spec_from_json(*file.problem));
  } else {
    throw std::invalid_argument("one of --problem, --spec or a config with \"problem\" is required");
  }

  const SolveReport report = solve(target->nlp, target->start, cfg);
  const fs::path out = prepare_out_dir(out_dir);
  write_text_file((out / "report.json").string(), report_to_json(report).dump(2) + "\n");
  std::ostringstream outer, inner;
  write_outer_csv(outer, report);
  write_inner_csv(inner, report, cfg.aa_depth > 0);
  write_text_file((out / "outer.csv").string(), outer.str());
  write_text_file((out / "inner.csv").string(), inner.str());

  std::cout << report.variant << ": " << to_string(report.status)
            << ", objective " << format_double(report.objective) << ", " << report.n_outer
            << " outer iterations, " << report.counters.n_g_evals << " constraint evaluations\n";
  return report.status == SolveStatus::Optimal ? kExitOk : kExitSolver;
}

int cmd_bench(const std::string& suite_name, int count, std::uint64_t seed,
              std::optional<double> magnitude, const std::string& accels, const SolverFlags& flags,
              const std::string& out_dir) {
  if (count < 1) throw std::invalid_argument("--count must be >= 1");
  const ConfigFile file = load_config(flags.config_path);
  const FslpConfig cfg = flags.config(file.solver ? &*file.solver : nullptr);
  const std::vector<Variant> variants = parse_variant_list(accels);
  Suite suite = suite_by_name(suite_name);
  if (file.problem) suite.base = spec_from_json(*file.problem);
  if (magnitude) suite.magnitude = *magnitude;

  const std::vector<OcpSpec> specs = perturbed_test_set(suite.base, count, suite.magnitude, seed);
  const std::vector<ProblemRun> runs = run_benchmark(specs, variants, cfg);
  const std::vector<BenchmarkRow> rows = aggregate(runs, variants);

  const fs::path out = prepare_out_dir(out_dir);
  Json manifest;
  manifest["suite"] = suite.name;
  manifest["seed"] = seed;
  manifest["count"] = count;
  manifest["magnitude"] = suite.magnitude;
  Json labels = Json::array();
  for (const Variant& v : variants) labels.push_back(v.label);
  manifest["variants"] = labels;
  manifest["solver"] = config_to_json(cfg);
  Json problems = Json::array();
  for (const OcpSpec& s : specs) problems.push_back(spec_to_json(s));
  manifest["problems"] = problems;
  write_text_file((out / "manifest.json").string(), manifest.dump(2) + "\n");

  std::ostringstream table, long_form;
  write_table_csv(table, rows);
  write_long_csv(long_form, runs);
  write_text_file((out / "table.csv").string(), table.str());
  write_text_file((out / "long.csv").string(), long_form.str());
  std::cout << table.str();

  bool all_optimal = true;
  for (const ProblemRun& r : runs) all_optimal = all_optimal && r.status == SolveStatus::Optimal;
  return all_optimal ? kExitOk : kExitSolver;
}

int cmd_trace_rates(const std::string& problems, const std::string& accels, SolverFlags flags,
                    const std::string& out_dir) {
  if (!flags.delta0) flags.delta0 = 0.25;
  const ConfigFile file = load_config(flags.config_path);
  const FslpConfig base = flags.config(file.solver ? &*file.solver : nullptr);
  const std::vector<Variant> variants = parse_variant_list(accels);

  std::vector<std::string> names;
  std::stringstream ss(problems);
  for (std::string name; std::getline(ss, name, ',');) {
    if (!name.empty()) names.push_back(name);
  }
  if (names.empty()) throw std::invalid_argument("--problems is empty");

  std::ostringstream csv;
  csv << "kind,problem,variant,iter,value,status\n";
  bool all_optimal = true;
  for (const std::string& name : names) {
    const NamedProblem target = named_problem(name);
    for (const Variant& v : variants) {
      FslpConfig cfg = base;
      cfg.aa_depth = v.aa_depth;
      const SolveReport report = solve(target.nlp, target.start, cfg);
      all_optimal = all_optimal && report.status == SolveStatus::Optimal;
      if (!report.outer_trace.empty() && !report.outer_trace.front().inner_trace.empty()) {
        const OuterTraceRow& first = report.outer_trace.front();
        const Vector& w_end = first.inner_trace.back().w;
        const std::string status = first.inner_status ? to_string(*first.inner_status) : "none";
        // iter 0 is w̄ for every variant
        for (std::size_t i = 0; i < first.inner_trace.size(); ++i) {
          csv << "inner_error," << name << ',' << v.label << ',' << i << ','
              << format_double((first.inner_trace[i].w - w_end).norm()) << ',' << status << '\n';
        }
      }
      for (const OuterTraceRow& row : report.outer_trace) {
        if (row.inner_status && *row.inner_status == InnerStatus::LpFailed && row.model_decrease == 0.0) {
          continue;  // the LP of this iteration failed, no model value exists
        }
        csv << "model_decrease," << name << ',' << v.label << ',' << row.k << ','
            << format_double(std::abs(row.model_decrease)) << ',' << to_string(report.status) << '\n';
      }
    }
  }
  const fs::path out = prepare_out_dir(out_dir);
  write_text_file((out / "rates.csv").string(), csv.str());
  return all_optimal ? kExitOk : kExitSolver;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible SLP solver with Anderson-accelerated feasibility iterations"};
  app.require_subcommand(1);

  std::string out_dir = ".";

  auto* solve_cmd = app.add_subcommand(
      "solve",
      "Solve one problem; writes report.json, outer.csv "
      "(k,objective,h,delta,model_decrease,inner_status,inner_iters,accepted) and inner.csv "
      "(outer_iter,inner_iter,h,dist_to_wbar,dist_to_what[,gamma_inf_norm,memory_cols,clipped])");
  std::string problem, spec_path;
  SolverFlags solve_flags;
  auto* problem_opt = solve_cmd->add_option("--problem", problem, "one of: " + join(kProblemNames));
  solve_cmd->add_option("--spec", spec_path, "OcpSpec JSON file")->excludes(problem_opt);
  solve_flags.add_to(solve_cmd, true);
  solve_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* bench_cmd = app.add_subcommand(
      "bench",
      "Solve a perturbed suite with several variants; writes manifest.json, table.csv "
      "(variant,mean_n_con,mean_n_iter,mean_wall_seconds,success_count,problem_count) and long.csv "
      "(problem_id,variant,status,n_con,n_iter,objective,max_accepted_h,max_accepted_ratio,"
      "n_accepted,wall_seconds)");
  std::string suite = "pointmass2d";
  int count = 100;
  std::uint64_t seed = 42;
  std::optional<double> magnitude;
  std::string bench_accels = "none,aa1,aa5,aa15";
  SolverFlags bench_flags;
  bench_cmd->add_option("--suite", suite, "one of: " + join(suite_names()))->capture_default_str();
  bench_cmd->add_option("--count", count, "number of perturbed problems")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
  bench_cmd->add_option("--magnitude", magnitude, "perturbation half-width (suite default if unset)");
  bench_cmd->add_option("--accels", bench_accels, "comma list of none, aa1, aa5, aa15, aa:<d>")
      ->capture_default_str();
  bench_flags.add_to(bench_cmd, false);
  bench_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* rates_cmd = app.add_subcommand(
      "trace-rates",
      "Inner error curves of the first outer iteration and |m_k| per outer iteration; writes "
      "rates.csv (kind,problem,variant,iter,value,status) with kind inner_error or model_decrease");
  std::string rate_problems = "circle";
  std::string rate_accels = "none,aa1,aa5";
  SolverFlags rate_flags;
  rates_cmd->add_option("--problems", rate_problems, "comma list of: " + join(kProblemNames))
      ->capture_default_str();
  rates_cmd->add_option("--accels", rate_accels, "comma list of none, aa1, aa5, aa15, aa:<d>")
      ->capture_default_str();
  rate_flags.add_to(rates_cmd, false);
  rates_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(problem, spec_path, solve_flags, out_dir);
    if (*bench_cmd) return cmd_bench(suite, count, seed, magnitude, bench_accels, bench_flags, out_dir);
    if (*rates_cmd) return cmd_trace_rates(rate_problems, rate_accels, rate_flags, out_dir);
  } catch (const std::invalid_argument& e) {  // includes SpecError
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EvaluationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
