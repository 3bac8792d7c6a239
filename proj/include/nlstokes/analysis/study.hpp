#pragma once

/**
 * @file study.hpp
 * @brief (delta, h) convergence ladders and their serialized reports.
 */

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlstokes/analysis/analysis.hpp"

namespace nls {

/**
 * @brief How the lattice spacing follows the horizon along a ladder.
 *
 * The default couples h = delta^1.5 / 2: tight enough that quadrature error,
 * which scales like (h/delta)^2 on uniform lattices, stays below the model
 * error being measured.
 */
struct CouplingRule {
    std::string description;
    std::function<double(double)> h_of_delta;

    static CouplingRule default_rule() { return power(1.5, 2.0); }
    static CouplingRule fixed(double h);
    /** @brief h(delta) = delta^a / c, described as "delta^a/c". */
    static CouplingRule power(double a, double c);
};

struct StudyRow {
    double delta = 0.0;
    double h = 0.0;
    int n_points = 0;
    int n_interior = 0;
    std::int64_t unknowns = 0;
    SolveErrors errors;
    double assemble_seconds = 0.0;  ///< reported in JSON only; CSV stays byte-stable
    double solve_seconds = 0.0;
    std::string method;
    int iterations = 0;
    bool ok = false;
    std::string failure;  ///< error text when the ladder point failed
};

struct StudyReport {
    std::string case_name;
    std::string domain_name;
    std::string kernel_name;
    std::string coupling;
    std::string solver;
    std::string version;

    std::vector<StudyRow> rows;  ///< sorted by descending delta

    // least-squares log-log slopes over all successful points; NaN until at
    // least three of them exist
    double order_u_l2 = 0.0;
    double order_u_energy = 0.0;
    double order_p_l2 = 0.0;
    bool partial = false;  ///< true when any ladder point failed

    /** @brief One CSV row per ladder point plus a commented orders block. */
    void write_csv(std::ostream& os) const;
    /** @brief Full report with metadata and per-row timings. */
    void write_json(std::ostream& os) const;
};

/**
 * @brief Run solve_errors across a descending delta ladder.
 *
 * Ladder points that fail are recorded with their error text and the report
 * is marked partial; the remaining points still run. Observed orders are
 * fitted by least squares over every successful point, never a single pair.
 *
 * @throws ConfigError for fewer than 3 deltas or a non-descending ladder.
 */
StudyReport convergence_study(const ManufacturedCase& mc, const KernelProfile& profile,
                              const std::vector<double>& deltas,
                              const CouplingRule& coupling = CouplingRule::default_rule(),
                              const SolverOptions& options = {});

}  // namespace nls
