#pragma once

/**
 * @file system.hpp
 * @brief The volume-constrained, stabilized nonlocal Stokes saddle system.
 *
 * Unknowns are laid out as [u at Interior points (dim components each,
 * rank-major), p at all points, one multiplier lambda for the mean-zero
 * pressure constraint]. Velocity values at Layer points are not unknowns;
 * they are eliminated at assembly as exact zeros.
 *
 * With L, G, D, S, M the operators of the assemble module, the model rows
 *
 *   momentum  (Interior):  (L u)_i - (G p)_i = (M f)_i
 *   continuity (all):      (D u)_i - (S p)_i - lambda = 0
 *   constraint:            sum_i V_i p_i = 0
 *
 * are scaled by -V_i (momentum), +V_i (continuity) and written with the
 * multiplier column equal to the constraint row, which makes the matrix
 * exactly symmetric: the off-diagonal couplings V_i G_ij and -(V D)^T agree
 * bit for bit because every entry is formed as (scale * R) * dx * (V_i V_j).
 * The u-block is positive definite (Layer coupling keeps the full neighbor
 * mass on the diagonal), the p-block negative semidefinite: a standard
 * symmetric indefinite saddle form.
 */

#include <string>
#include <vector>

#include "nlstokes/geometry/cloud.hpp"
#include "nlstokes/kernels/kernel.hpp"
#include "nlstokes/operators/sparse.hpp"

namespace nls {

struct SolverOptions {
    enum class Method { Auto, Direct, Krylov };
    Method method = Method::Auto;
    double rtol = 1e-10;  ///< Krylov relative-residual target
    int max_iter = 0;     ///< 0 picks a size-based default
};

/// Threshold of the Auto policy: direct factorization at or below, Krylov
/// beyond.
constexpr std::int64_t kDirectUnknownLimit = 20000;

struct NonlocalStokesProblem {
    const PointCloud* cloud = nullptr;
    const ScaledKernel* kernel = nullptr;
    std::vector<double> f;  ///< dim-interleaved samples at every point
    SolverOptions options;
};

struct AssembledSystem {
    const PointCloud* cloud = nullptr;
    const ScaledKernel* kernel = nullptr;
    int dim = 0;
    int n_points = 0;
    int n_interior = 0;
    std::int64_t unknowns = 0;  ///< dim * n_interior + n_points + 1

    SparseMatrix matrix;  ///< symmetric, block == 1
    std::vector<double> rhs;
    std::vector<double> mf;       ///< mollified forcing at all points (dim-interleaved)
    std::vector<int> rank_of;     ///< point id -> interior rank, -1 on Layer
    std::vector<int> interior;    ///< rank -> point id (ascending)
};

struct Solution {
    std::vector<double> u;  ///< dim-interleaved over all points; bit-zero on Layer
    std::vector<double> p;  ///< at all points
    double lambda = 0.0;
    double residual = 0.0;    ///< relative linear residual of the solve
    double energy_gap = 0.0;  ///< energy-identity defect, filled by solve()
    int iterations = 0;       ///< 0 for the direct path
    std::string method;       ///< "direct" or "krylov"
};

/**
 * @brief Build matrix and right-hand side in one neighbor sweep.
 *
 * The operators are not materialized separately; each row streams its
 * neighbor data once. Keeps the fine end of convergence ladders within
 * memory bounds.
 *
 * @throws ValidationError for non-finite forcing or a size mismatch.
 * @throws ConfigError     for kernel/cloud mismatch (as in the assemblers).
 */
AssembledSystem assemble_system(const NonlocalStokesProblem& problem);

/**
 * @brief Solve the assembled system.
 *
 * Direct path: sparse LU, contract residual <= 1e-10 * ||rhs||.
 * Krylov path: preconditioned MINRES, contract relative residual <= rtol.
 *
 * @throws SolverError on factorization failure or non-convergence; the
 *         error carries the residual history.
 */
Solution solve(const AssembledSystem& system, const SolverOptions& options);

/**
 * @brief Relative defect of the discrete energy identity.
 *
 * |E_u + E_p + 2 sum_i V_i (Mf)_i . u_i| / max(E_u, tiny) with
 * E_u = (1/delta^2) sum_{ij} R_delta |u_i - u_j|^2 V_i V_j and
 * E_p = sum_{ij} Rbar_delta (p_i - p_j)^2 V_i V_j, streamed over neighbor
 * pairs.
 */
double energy_identity_gap(const Solution& solution, const AssembledSystem& system);

/**
 * @brief (||u|| + ||p||) / ||f|| in V-weighted discrete L2 norms.
 * @throws ValidationError when ||f|| = 0 (ratio undefined).
 */
double stability_ratio(const Solution& solution, const NonlocalStokesProblem& problem);

}  // namespace nls
