/**
 * @file sparse.cpp
 * @brief CSR applications and coordinate export.
 */

#include "nlstokes/operators/sparse.hpp"

#include <ostream>

#include "nlstokes/common.hpp"

namespace nls {

namespace {
constexpr int kParallelRowThreshold = 8192;
}

void SparseMatrix::apply(const double* x, double* y) const {
    auto body = [&](int r0, int r1) {
        for (int i = r0; i < r1; ++i) {
            double acc = 0.0;
            if (zero_row_sums) {
                const double xi = x[i];
                for (std::int64_t s = row_start[i]; s < row_start[i + 1]; ++s)
                    acc += val[s] * (x[col[s]] - xi);
            } else {
                for (std::int64_t s = row_start[i]; s < row_start[i + 1]; ++s)
                    acc += val[s] * x[col[s]];
            }
            y[i] = acc;
        }
    };
    if (rows >= kParallelRowThreshold)
        parallel_for(rows, body);
    else
        body(0, rows);
}

void SparseMatrix::apply_fields(const double* x, double* y, int ncomp) const {
    auto body = [&](int r0, int r1) {
        for (int i = r0; i < r1; ++i) {
            double acc[3] = {0.0, 0.0, 0.0};
            const double* xi = x + static_cast<std::int64_t>(i) * ncomp;
            for (std::int64_t s = row_start[i]; s < row_start[i + 1]; ++s) {
                const double v = val[s];
                const double* xj = x + static_cast<std::int64_t>(col[s]) * ncomp;
                if (zero_row_sums)
                    for (int c = 0; c < ncomp; ++c) acc[c] += v * (xj[c] - xi[c]);
                else
                    for (int c = 0; c < ncomp; ++c) acc[c] += v * xj[c];
            }
            for (int c = 0; c < ncomp; ++c) y[static_cast<std::int64_t>(i) * ncomp + c] = acc[c];
        }
    };
    if (rows >= kParallelRowThreshold)
        parallel_for(rows, body);
    else
        body(0, rows);
}

void SparseMatrix::apply_grad(const double* p, double* out) const {
    auto body = [&](int r0, int r1) {
        for (int i = r0; i < r1; ++i) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (std::int64_t s = row_start[i]; s < row_start[i + 1]; ++s) {
                const double pj = p[col[s]];
                const double* e = val.data() + s * block;
                for (int c = 0; c < block; ++c) acc[c] += e[c] * pj;
            }
            for (int c = 0; c < block; ++c) out[static_cast<std::int64_t>(i) * block + c] = acc[c];
        }
    };
    if (rows >= kParallelRowThreshold)
        parallel_for(rows, body);
    else
        body(0, rows);
}

void SparseMatrix::apply_div(const double* u, double* out) const {
    auto body = [&](int r0, int r1) {
        for (int i = r0; i < r1; ++i) {
            double acc = 0.0;
            for (std::int64_t s = row_start[i]; s < row_start[i + 1]; ++s) {
                const double* uj = u + static_cast<std::int64_t>(col[s]) * block;
                const double* e = val.data() + s * block;
                for (int c = 0; c < block; ++c) acc += e[c] * uj[c];
            }
            out[i] = acc;
        }
    };
    if (rows >= kParallelRowThreshold)
        parallel_for(rows, body);
    else
        body(0, rows);
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
    os << "# rows " << rows << " cols " << cols << " block " << block << " entries " << entries()
       << "\n";
    for (int i = 0; i < rows; ++i)
        for (std::int64_t s = row_start[i]; s < row_start[i + 1]; ++s) {
            if (block == 1) {
                os << i << ' ' << col[s] << ' ' << format_g17(val[s]) << '\n';
            } else {
                for (int c = 0; c < block; ++c)
                    os << i << ' ' << col[s] << ' ' << c << ' '
                       << format_g17(val[s * block + c]) << '\n';
            }
        }
}

}  // namespace nls
