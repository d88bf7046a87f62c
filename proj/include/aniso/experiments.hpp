#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/report.hpp"

namespace aniso {

using json = nlohmann::ordered_json;

/// Registered experiment names in execution order (one per acceptance item).
std::vector<std::string> experiment_names();

/// Dispatches to the named experiment. Unknown names throw InvalidParameter;
/// precondition violations surface from the modules. Deterministic per
/// (name, config): equal inputs produce byte-identical reports.
ExperimentReport run_experiment(const std::string& name, const json& config);

// Individual experiments; config keys are optional with conservative defaults
// (see README for the schema).
ExperimentReport experiment_rho_axioms(const json& config);
ExperimentReport experiment_polar_volume(const json& config);
ExperimentReport experiment_transform(const json& config);
ExperimentReport experiment_semigroup_law(const json& config);
ExperimentReport experiment_subordination(const json& config);
ExperimentReport experiment_kernel_decay(const json& config);
ExperimentReport experiment_dalpha_l2(const json& config);
ExperimentReport experiment_tj_decay(const json& config);
ExperimentReport experiment_gq_domination(const json& config);
ExperimentReport experiment_cz_suite(const json& config);
ExperimentReport experiment_weak_type(const json& config);
ExperimentReport experiment_sharpness(const json& config);

// shared helpers -----------------------------------------------------------

/// Least-squares slope of y against x over log2-log2 points.
double fit_log2_slope(const std::vector<std::pair<double, double>>& points,
                      double* residual = nullptr);

} // namespace aniso
