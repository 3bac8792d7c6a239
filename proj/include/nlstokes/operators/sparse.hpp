#pragma once

/**
 * @file sparse.hpp
 * @brief Compressed-row matrices with scalar or small-vector entries.
 *
 * One structure serves two entry shapes: block == 1 stores a scalar per
 * (row, col) slot (Laplacian, stabilizer, mollifier), block == n stores an
 * n-vector per slot (gradient, divergence). Column indices are strictly
 * ascending within each row, so applications are deterministic regardless of
 * how many threads assembled or apply the matrix.
 */

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nls {

struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    /// Values per stored entry: 1 for scalar matrices, the spatial dimension
    /// for gradient/divergence (val is entry-major, components adjacent).
    int block = 1;

    /// Set on matrices whose rows sum to zero by construction (Laplacian,
    /// stabilizer). Their applications then run in difference form,
    /// sum_j A_ij (x_j - x_i), which is the defining quadrature and maps
    /// constants to bit-zero for any constant, not just powers of two.
    bool zero_row_sums = false;

    std::vector<std::int64_t> row_start;  ///< size rows + 1, offsets into col
    std::vector<int> col;                 ///< ascending within each row
    std::vector<double> val;              ///< col.size() * block values

    std::int64_t entries() const { return static_cast<std::int64_t>(col.size()); }

    /** @brief y = A x for scalar matrices (block == 1). */
    void apply(const double* x, double* y) const;

    /**
     * @brief Blockwise apply of a scalar matrix to an interleaved field:
     *        y[i*ncomp + c] = sum_j A_ij x[j*ncomp + c].
     */
    void apply_fields(const double* x, double* y, int ncomp) const;

    /** @brief Gradient action (block == n): scalar in, n-vector out. */
    void apply_grad(const double* p, double* out) const;

    /** @brief Divergence action (block == n): n-vector in, scalar out. */
    void apply_div(const double* u, double* out) const;

    /**
     * @brief Plain-text coordinate dump: "row col value" per line, plus a
     *        leading component index when block > 1. Indices are 0-based,
     *        values round-trip exactly.
     */
    void write_coordinate(std::ostream& os) const;
};

}  // namespace nls
