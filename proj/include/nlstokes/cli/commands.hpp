#pragma once

/**
 * @file commands.hpp
 * @brief The four CLI commands, each returning a process exit code.
 *
 * Exit codes are the whole contract: 0 success, 2 config error, 3 solver
 * failure, 4 partial study, 5 failed checks. Nothing else is returned;
 * main() maps uncaught ConfigError/ValidationError to 2 and SolverError
 * to 3 so the codes hold on every path.
 */

#include <iosfwd>
#include <string>

#include "nlstokes/cli/config.hpp"

namespace nls {

/** @brief Solve one instance: solution.csv, diagnostics.json, config echo. */
int cmd_solve(const RunConfig& cfg, const std::string& out_dir, bool force);

/** @brief Convergence ladder: study CSV/JSON, SVG plot, config echo. */
int cmd_study(const RunConfig& cfg, const std::string& out_dir, bool force);

/**
 * @brief Run an invariant suite ("kernels", "operators", "poincare",
 *        "energy" or "all"): pass/fail table on stdout plus checks.csv.
 */
int cmd_check(const RunConfig& cfg, const std::string& suite, const std::string& out_dir,
              bool force, std::ostream& os);

/** @brief Deterministic capability listing. */
int cmd_info(std::ostream& os);

}  // namespace nls
