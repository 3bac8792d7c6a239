#pragma once

/**
 * @file assemble.hpp
 * @brief Discrete nonlocal operators on a partitioned point cloud.
 *
 * All five operators share the same quadrature pattern: a row couples a
 * point to every neighbor within 2*delta and weighs it by kernel value times
 * cell volume. With w_ij = R_delta(x_i,x_j) V_j and wb_ij the same for the
 * integrated profile Rbar:
 *
 *   Laplacian   (L u)_i  = 1/delta^2     sum_j w_ij (u_j - u_i)
 *   Gradient    (G p)_i  = 1/(2 delta^2) sum_j w_ij (x_j - x_i) p_j
 *   Divergence  (D u)_i  = 1/(2 delta^2) sum_j w_ij (x_j - x_i) . u_j
 *   Stabilizer  (S p)_i  = sum_j wb_ij (p_j - p_i)
 *   Mollifier   (M f)_i  = sum_j wb_ij f_j
 *
 * Rows exist for every point, Layer rows included; who uses which row is the
 * system module's business. Laplacian and stabilizer diagonals are balanced
 * so their rows sum to zero exactly in the order a CSR traversal adds them,
 * which makes "constants are in the null space" a bit-level fact rather than
 * a tolerance. Off-diagonal entries with magnitude below 1e-300 are dropped.
 *
 * Gradient and divergence coincide entry for entry; only how an application
 * contracts the n-vector slots differs.
 */

#include "nlstokes/geometry/cloud.hpp"
#include "nlstokes/kernels/kernel.hpp"
#include "nlstokes/operators/sparse.hpp"

namespace nls {

/**
 * @brief Scratch holding one row's neighbor geometry and kernel values.
 *
 * load() fills, for point i: neighbor ids, offsets dx = x_j - x_i
 * (dim-interleaved), squared distances and the unscaled profile values
 * R(q), Rbar(q) at q = d2 / (2 delta)^2. The caller folds scale factors.
 * Reuse one instance across rows to keep assembly allocation-free.
 */
struct NeighborRow {
    std::vector<int> ids;
    std::vector<double> dx;
    std::vector<double> d2;
    std::vector<double> R;
    std::vector<double> Rbar;
    int count = 0;
    int self = -1;  ///< position of i in ids

    void load(const PointCloud& cloud, const ScaledKernel& kernel, int i, bool sorted = true);
};

/** @name Matrix assembly
 * Each returns rows for all points of the cloud. Preconditions shared by
 * all five: the cloud is partitioned and kernel.delta() == cloud.delta()
 * with matching dimension, else ConfigError.
 */
///@{
SparseMatrix assemble_laplacian(const PointCloud& cloud, const ScaledKernel& kernel);
SparseMatrix assemble_gradient(const PointCloud& cloud, const ScaledKernel& kernel);
SparseMatrix assemble_divergence(const PointCloud& cloud, const ScaledKernel& kernel);
SparseMatrix assemble_stabilizer(const PointCloud& cloud, const ScaledKernel& kernel);
SparseMatrix assemble_mollifier(const PointCloud& cloud, const ScaledKernel& kernel);
///@}

/** @brief All five operators from a single neighbor sweep. */
struct OperatorSet {
    const PointCloud* cloud = nullptr;
    double delta = 0.0;
    SparseMatrix lap;
    SparseMatrix grad;
    SparseMatrix div;
    SparseMatrix stab;
    SparseMatrix mollify;
};

OperatorSet assemble_operators(const PointCloud& cloud, const ScaledKernel& kernel);

/** @name Matrix-free rows
 * Same quadrature as the assemblers, evaluated on the fly against sampled
 * fields. These keep large-N diagnostics (truncation ladders, energy sums,
 * mollifier row sums) within memory bounds where an assembled matrix would
 * not fit. `field` is ncomp-interleaved over all cloud points.
 */
///@{
void laplacian_row(const PointCloud& cloud, const ScaledKernel& kernel, int i,
                   const double* field, int ncomp, double* out, NeighborRow& scratch);
void mollifier_row(const PointCloud& cloud, const ScaledKernel& kernel, int i,
                   const double* field, int ncomp, double* out, NeighborRow& scratch);
double mollifier_row_sum(const PointCloud& cloud, const ScaledKernel& kernel, int i,
                         NeighborRow& scratch);
void gradient_row(const PointCloud& cloud, const ScaledKernel& kernel, int i, const double* p,
                  double* out, NeighborRow& scratch);
double divergence_row(const PointCloud& cloud, const ScaledKernel& kernel, int i, const double* u,
                      NeighborRow& scratch);
double stabilizer_row(const PointCloud& cloud, const ScaledKernel& kernel, int i, const double* p,
                      NeighborRow& scratch);
///@}

}  // namespace nls
