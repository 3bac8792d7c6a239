#pragma once

/**
 * @file simd_ops.hpp
 * @brief Data-parallel inner-loop primitives with runtime ISA dispatch.
 *
 * The assembly sweeps, energy reductions and Krylov iterations spend nearly
 * all of their time in a handful of flat array loops: squared distances to a
 * fixed center, polynomial kernel-profile evaluation over a batch of squared
 * ratios, dot/axpy style vector updates and gathered sparse row products.
 * Each primitive has a scalar reference implementation and an AVX2+FMA
 * variant; the active table is chosen once at startup from CPU capabilities
 * and can be forced with the NLSTOKES_SIMD environment variable
 * ("scalar" | "avx2" | "auto").
 *
 * The two variants are equivalence-tested against each other; they may
 * differ by floating-point reassociation only. Within one process the
 * selection is fixed, so all outputs remain deterministic.
 */

#include <cstddef>

namespace nls::simd {

/** @brief Function table for one instruction-set variant. */
struct OpsTable {
    const char* name;  ///< "scalar" or "avx2"

    /// Σ_k x[k]·y[k]
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// Σ_k x[k]²
    double (*nrm2sq)(const double* x, std::size_t n);
    /// y[k] += a·x[k]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    /// y[k] = x[k] + b·y[k]
    void (*xpby)(const double* x, double b, double* y, std::size_t n);
    /// x[k] *= a
    void (*scal)(double a, double* x, std::size_t n);

    /// out[k] = (xs[k]-cx)² + (ys[k]-cy)²  (planar point batches)
    void (*sqdist2)(double cx, double cy, const double* xs, const double* ys,
                    double* out, std::size_t n);

    /// Quadratic profile R(q) = max(1-q, 0)² over a batch of squared ratios.
    void (*quad_profile_R)(const double* q, double* out, std::size_t n);
    /// Integrated quadratic profile R̄(q) = max(1-q, 0)³/3.
    void (*quad_profile_Rbar)(const double* q, double* out, std::size_t n);

    /// Σ_k w[k]·(a[k] - b)²  (difference-form quadratic energies)
    double (*wsqdiff)(const double* w, const double* a, double b, std::size_t n);

    /// Σ_k vals[k]·x[cols[k]]  (one compressed sparse row)
    double (*spmv_row)(const double* vals, const int* cols, std::size_t nnz, const double* x);
};

/** @brief Portable reference implementation (always available). */
const OpsTable& scalar_table();

/** @brief Table selected at startup from CPU features and NLSTOKES_SIMD. */
const OpsTable& active();

/** @brief Name of the active table, for diagnostics. */
const char* active_name();

/** @brief True when the AVX2+FMA variant is compiled in and usable here. */
bool avx2_available();

}  // namespace nls::simd
