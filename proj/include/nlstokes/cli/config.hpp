#pragma once

/**
 * @file config.hpp
 * @brief JSON run configuration: schema, defaults and eager validation.
 *
 * One config file drives every command. Shape (all keys optional except
 * delta; see docs/config.md for the normative schema):
 *
 *   {
 *     "domain":   "unit-disk",                    // or {"name": "..."}
 *     "kernel":   {"profile": "quadratic"},       // or {"table": "R.csv"}
 *     "delta":    0.2,                            // or a descending ladder
 *     "coupling": {"rule": "delta^1.5/2"},        // or {"h": 0.05}
 *     "case":     "disk-swirl",                   // "zero", or {"forcing": "f.csv"}
 *     "solver":   {"method": "auto", "rtol": 1e-10, "max_iter": 0},
 *     "output":   "out",
 *     "seed":     1
 *   }
 *
 * Violations raise ConfigError naming the offending key.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "nlstokes/analysis/study.hpp"
#include "nlstokes/system/system.hpp"

namespace nls {

struct RunConfig {
    std::string domain = "unit-disk";
    std::string kernel_profile = "quadratic";  ///< built-in name; empty if table
    std::string kernel_table;                  ///< CSV path; wins when nonempty
    std::vector<double> deltas;                ///< scalar = one entry; descending
    CouplingRule coupling = CouplingRule::default_rule();
    std::string case_name = "disk-swirl";  ///< built-in case, "zero", or empty
    std::string forcing_table;             ///< CSV path; exclusive with case_name
    SolverOptions solver;
    std::string output = "out";
    std::uint64_t seed = 1;
};

/** @brief Parse and validate a config file. @throws ConfigError. */
RunConfig load_config(const std::string& path);

/** @brief Parse and validate config text (file contents). @throws ConfigError. */
RunConfig parse_config(const std::string& text);

/** @brief The loaded kernel profile (built-in or table). */
KernelProfile config_profile(const RunConfig& cfg);

/** @brief Normalized config echo for report metadata (deterministic). */
std::string config_echo_json(const RunConfig& cfg);

}  // namespace nls
