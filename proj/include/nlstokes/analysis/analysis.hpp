#pragma once

/**
 * @file analysis.hpp
 * @brief Model diagnostics: truncation order, Poincare constants, boundary
 *        layer decay and discretization errors.
 *
 * These are the measurable claims behind the solver: the nonlocal Laplacian
 * is first-order consistent in delta, both Poincare constants stay bounded
 * away from zero as delta shrinks, the exact flow carries O(delta^3) energy
 * in the boundary layer, and the solved fields converge to the manufactured
 * ones. Everything here streams neighbor rows, so ladders reaching a hundred
 * thousand points never materialize a matrix larger than the Poincare forms.
 */

#include <vector>

#include "nlstokes/analysis/case.hpp"
#include "nlstokes/geometry/cloud.hpp"
#include "nlstokes/geometry/domain.hpp"
#include "nlstokes/kernels/kernel.hpp"
#include "nlstokes/system/system.hpp"

namespace nls {

/**
 * @brief V-weighted L2 norm over Interior points of the consistency defect
 *        r_i = (L u)_i - (M lap_u)_i between the nonlocal Laplacian of the
 *        exact velocity and the mollified exact Laplacian.
 *
 * First-order consistency in delta is the model claim; linear fields cancel
 * exactly on symmetric stencils.
 */
double truncation_residual(const ManufacturedCase& mc, const PointCloud& cloud,
                           const ScaledKernel& kernel);

/** @name Rayleigh quotients of the two Poincare forms
 * The velocity quotient takes a scalar field supported on Interior points
 * (Layer values are ignored): boundary coupling enters through the Layer
 * neighbor mass. The pressure quotient takes a field on all points. Both
 * return form / (V-weighted squared L2 norm).
 */
///@{
double poincare_quotient_velocity(const PointCloud& cloud, const ScaledKernel& kernel,
                                  const std::vector<double>& field);
double poincare_quotient_pressure(const PointCloud& cloud, const ScaledKernel& kernel,
                                  const std::vector<double>& field);
///@}

/**
 * @brief Smallest velocity-Poincare quotient, by inverse iteration on the
 *        (positive definite) form matrix against the volume mass matrix.
 *
 * @param rtol relative eigenvalue tolerance (default 1e-6).
 * @throws SolverError on stagnation, carrying the eigenvalue iterates.
 */
double poincare_constant_velocity(const PointCloud& cloud, const ScaledKernel& kernel,
                                  double rtol = 1e-6);

/**
 * @brief Smallest pressure-Poincare quotient over fields with V-weighted
 *        zero mean on Interior points (the form's null direction, the
 *        constant, is excluded by a bordered constraint).
 *
 * @throws SolverError on stagnation, carrying the eigenvalue iterates.
 */
double poincare_constant_pressure(const PointCloud& cloud, const ScaledKernel& kernel,
                                  double rtol = 1e-6);

/**
 * @brief Exact-flow energy inside the no-slip layer:
 *        sum over Layer points of V_i |u(x_i)|^2.
 *
 * The quadrature always runs on a fine cloud: the spacing used is
 * min(h, delta/10), refining coarser requests so the layer is resolved.
 * Decays like delta^3 for flows vanishing linearly at the boundary.
 */
double boundary_layer_norm(const ManufacturedCase& mc, const Domain& domain, double delta,
                           double h);

struct SolveErrors {
    double error_u_l2 = 0.0;      ///< V-weighted L2 of u - u_delta over Interior
    double error_u_energy = 0.0;  ///< nonlocal energy seminorm of the error, all pairs
    double error_p_l2 = 0.0;      ///< V-weighted L2 of the mean-aligned pressure error
};

/**
 * @brief Error norms of an existing discrete solution against the case.
 *
 * The pressure error subtracts the Interior V-weighted mean of p - p_delta
 * from the difference before taking the norm, so the free constant never
 * pollutes the comparison.
 */
SolveErrors compare_solution(const ManufacturedCase& mc, const PointCloud& cloud,
                             const ScaledKernel& kernel, const Solution& sol);

/**
 * @brief Solve the nonlocal system for the case's forcing on the unit disk
 *        at (delta, h) and compare against the exact fields.
 *
 * Builds the cloud, assembles, solves with the given options and delegates
 * to compare_solution. Deterministic for the direct solver: two runs give
 * bit-identical numbers.
 *
 * @throws SolverError propagated from the solve.
 */
SolveErrors solve_errors(const ManufacturedCase& mc, const KernelProfile& profile, double delta,
                         double h, const SolverOptions& options = {});

}  // namespace nls
