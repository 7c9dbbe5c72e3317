#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "fslp/outer.hpp"
#include "fslp/problems.hpp"

namespace fslp {

using Json = nlohmann::ordered_json;

/// %.17g, which round-trips every finite double.
std::string format_double(double value);

// OcpSpec document:
//   {"system": "PointMass2D" | "DoubleIntegrator1D", "N": int,
//    "x_start", "x_end", "u_min", "u_max", "x_min", "x_max": [numbers],
//    "mu0", "muN": [numbers] (optional, default 100 per state),
//    "v_max", "u_ball": number or null, "obstacle": null or
//    {"vertices": [[x, y], ...], "r_safe": number}, "T_min", "T_max": number}
// Unknown keys are rejected so that typos do not silently fall back to defaults.
Json spec_to_json(const OcpSpec& spec);
OcpSpec spec_from_json(const Json& doc);

// FslpConfig document: every field of FslpConfig, AaConfig and InnerConfig,
// flattened; missing keys keep their defaults.
Json config_to_json(const FslpConfig& cfg);
FslpConfig config_from_json(const Json& doc);

/// Report with a fixed key order; the traces go to the CSV writers.
Json report_to_json(const SolveReport& report);

/// k,objective,h,delta,model_decrease,inner_status,inner_iters,accepted
void write_outer_csv(std::ostream& out, const SolveReport& report);
/// outer_iter,inner_iter,h,dist_to_wbar,dist_to_what and, with Anderson
/// columns, gamma_inf_norm,memory_cols,clipped.
void write_inner_csv(std::ostream& out, const SolveReport& report, bool anderson_columns);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fslp
