#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fslp/outer.hpp"
#include "fslp/problems.hpp"

namespace fslp {

struct Variant {
  std::string label;  // FSLP, AA(d)
  int aa_depth = 0;
};

/// none | aa1 | aa5 | aa15 | aa<d> | aa:<d>; throws std::invalid_argument.
Variant parse_variant(const std::string& token);
/// Comma-separated list of parse_variant tokens, duplicates rejected.
std::vector<Variant> parse_variant_list(const std::string& list);

/// A named family of perturbed problems.
struct Suite {
  std::string name;
  OcpSpec base;
  double magnitude = 0.01;
};

/// pointmass2d (speed ball active, under-determined), pointmass2d-free
/// (speed ball removed) and di1d (odd N, fully determined).
Suite suite_by_name(const std::string& name);
std::vector<std::string> suite_names();

/// Outcome of one (problem, variant) solve plus the checks re-run on its trace.
struct ProblemRun {
  int problem_id = 0;
  std::string variant;
  SolveStatus status = SolveStatus::MaxIter;
  std::int64_t n_con = 0;  // constraint (g) evaluations
  int n_iter = 0;          // outer iterations
  double objective = 0.0;
  double wall_seconds = 0.0;
  /// h re-evaluated at every accepted iterate, maximum over the run.
  double max_accepted_h = 0.0;
  /// ||w̄ - w̃|| / ||w̄ - ŵ|| over accepted steps, maximum over the run.
  double max_accepted_ratio = 0.0;
  int n_accepted = 0;
};

struct BenchmarkRow {
  std::string variant;
  double mean_n_con = 0.0;
  double mean_n_iter = 0.0;
  double mean_wall_seconds = 0.0;
  int success_count = 0;
  int problem_count = 0;
};

/// Feasibility and projection-ratio audit of a finished solve.
void audit_report(const StructuredNlp& nlp, const SolveReport& report, ProblemRun& run);

/// Solves every (problem, variant) pair; rows ordered by problem id, then
/// by the order of `variants`. Generation errors are raised before any solve.
std::vector<ProblemRun> run_benchmark(const std::vector<OcpSpec>& problems,
                                      const std::vector<Variant>& variants,
                                      const FslpConfig& base_config);

/// Means are over successful (Optimal) runs only.
std::vector<BenchmarkRow> aggregate(const std::vector<ProblemRun>& runs,
                                    const std::vector<Variant>& variants);

/// variant,mean_n_con,mean_n_iter,mean_wall_seconds,success_count,problem_count
void write_table_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
/// problem_id,variant,status,n_con,n_iter,objective,max_accepted_h,
/// max_accepted_ratio,n_accepted,wall_seconds
void write_long_csv(std::ostream& out, const std::vector<ProblemRun>& runs);

}  // namespace fslp
