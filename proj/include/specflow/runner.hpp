#ifndef SPECFLOW_RUNNER_HPP
#define SPECFLOW_RUNNER_HPP

#include <optional>
#include <string>

#include "specflow/json_io.hpp"
#include "specflow/report.hpp"

namespace specflow {

/// One experiment: instance recipe, task and task parameters.  A fixed seed
/// and config give byte-identical report files.
struct ExperimentConfig {
    uint64_t seed = 42;
    Json algebra;     // optional context spec: [{"dim", "weight"}, ...]
    Json instance;    // {"kind": explicit|random|gauge|lattice_shift, ...}
    std::string task; // ssf | sf | eta | doi | verify | demo
    Json parameters;  // task-specific
    std::string out_dir;
    std::string format = "json";  // json | csv | both
    double tol = 1e-8;            // report-level pass threshold for residuals
};

/// Parses a config object; unknown tasks or malformed fields throw
/// std::invalid_argument.
ExperimentConfig parse_config(const Json& j);

/// Deterministic instance from the config: the pair (h0, h1).
std::pair<BlockOperator, BlockOperator> generate_instance(const ExperimentConfig& config);

/// Dispatches the task and assembles the report.  Numerical check failures
/// are reported, not thrown; malformed configs throw std::invalid_argument.
Report run(const ExperimentConfig& config);

}  // namespace specflow

#endif
