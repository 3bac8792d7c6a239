/**
 * @file assemble.cpp
 * @brief Row-parallel assembly of the five nonlocal operators.
 */

#include "nlstokes/operators/assemble.hpp"

#include <algorithm>
#include <cmath>

namespace nls {

namespace {

// Magnitude below which an off-diagonal weight counts as structurally zero.
constexpr double kDropBelow = 1e-300;

void check_compatible(const PointCloud& cloud, const ScaledKernel& kernel) {
    if (cloud.delta() <= 0.0)
        throw ConfigError("cloud is not partitioned; call partition() before assembly");
    if (kernel.dim() != cloud.dim())
        throw ConfigError("kernel dimension " + std::to_string(kernel.dim()) +
                          " does not match cloud dimension " + std::to_string(cloud.dim()));
    if (kernel.delta() != cloud.delta())
        throw ConfigError("kernel delta " + format_g17(kernel.delta()) +
                          " does not match cloud delta " + format_g17(cloud.delta()));
}

/// Per-row weights shared by the assemblers: wl for the Laplacian, wg for
/// gradient/divergence (before the dx factor), wb for Rbar-based operators.
struct RowWeights {
    std::vector<double> wl, wg, wb;

    void compute(const NeighborRow& nr, const PointCloud& cloud, double cl, double cg, double cb) {
        const std::size_t k = static_cast<std::size_t>(nr.count);
        wl.resize(k);
        wg.resize(k);
        wb.resize(k);
        for (std::size_t s = 0; s < k; ++s) {
            const double vj = cloud.volume(nr.ids[s]);
            wl[s] = (cl * nr.R[s]) * vj;
            wg[s] = (cg * nr.R[s]) * vj;
            wb[s] = (cb * nr.Rbar[s]) * vj;
        }
    }
};

/// Make the row sum exactly zero in CSR traversal order: seed the diagonal
/// with the negated off-diagonal sum, then absorb the residual of the full
/// in-order sum until it vanishes (one or two corrections in practice).
void balance_diagonal(double* v, int k, int diag) {
    double s = 0.0;
    for (int t = 0; t < k; ++t)
        if (t != diag) s += v[t];
    v[diag] = -s;
    for (int pass = 0; pass < 50; ++pass) {
        double r = 0.0;
        for (int t = 0; t < k; ++t) r += v[t];
        if (r == 0.0) break;
        v[diag] -= r;
    }
}

struct Targets {
    SparseMatrix* lap = nullptr;
    SparseMatrix* grad = nullptr;
    SparseMatrix* stab = nullptr;
    SparseMatrix* mollify = nullptr;
};

void assemble_into(const PointCloud& cloud, const ScaledKernel& kernel, const Targets& out) {
    check_compatible(cloud, kernel);

    const int n = cloud.size();
    const int dim = cloud.dim();
    const double delta = cloud.delta();
    const double cl = kernel.c_delta() / (delta * delta);
    const double cg = kernel.c_delta() / (2.0 * delta * delta);
    const double cb = kernel.c_delta();

    auto init = [&](SparseMatrix* m, int block) {
        if (!m) return;
        m->rows = n;
        m->cols = n;
        m->block = block;
        m->row_start.assign(static_cast<std::size_t>(n) + 1, 0);
    };
    init(out.lap, 1);
    init(out.grad, dim);
    init(out.stab, 1);
    init(out.mollify, 1);
    if (out.lap) out.lap->zero_row_sums = true;
    if (out.stab) out.stab->zero_row_sums = true;

    // Pass 1: per-row entry counts under the drop rule. Weights are
    // recomputed in pass 2; rows are pure functions of (cloud, kernel), so
    // the two passes agree and any thread split yields the same matrix.
    parallel_for(n, [&](int r0, int r1) {
        NeighborRow nr;
        RowWeights w;
        for (int i = r0; i < r1; ++i) {
            nr.load(cloud, kernel, i);
            w.compute(nr, cloud, cl, cg, cb);
            std::int64_t n_lap = 0, n_grad = 0, n_stab = 0, n_moll = 0;
            for (int s = 0; s < nr.count; ++s) {
                const bool is_self = (s == nr.self);
                if (out.lap && (is_self || w.wl[s] >= kDropBelow)) ++n_lap;
                if (out.grad && !is_self) {
                    double mx = 0.0;
                    for (int c = 0; c < dim; ++c)
                        mx = std::max(mx, std::abs(w.wg[s] * nr.dx[s * dim + c]));
                    if (mx >= kDropBelow) ++n_grad;
                }
                if (out.stab && (is_self || w.wb[s] >= kDropBelow)) ++n_stab;
                if (out.mollify && w.wb[s] >= kDropBelow) ++n_moll;
            }
            if (out.lap) out.lap->row_start[i + 1] = n_lap;
            if (out.grad) out.grad->row_start[i + 1] = n_grad;
            if (out.stab) out.stab->row_start[i + 1] = n_stab;
            if (out.mollify) out.mollify->row_start[i + 1] = n_moll;
        }
    });

    auto finish_offsets = [&](SparseMatrix* m) {
        if (!m) return;
        for (int i = 0; i < n; ++i) m->row_start[i + 1] += m->row_start[i];
        m->col.resize(static_cast<std::size_t>(m->row_start[n]));
        m->val.resize(static_cast<std::size_t>(m->row_start[n]) * m->block);
    };
    finish_offsets(out.lap);
    finish_offsets(out.grad);
    finish_offsets(out.stab);
    finish_offsets(out.mollify);

    // Pass 2: fill values; neighbor ids arrive ascending, so columns are
    // strictly ascending by construction.
    parallel_for(n, [&](int r0, int r1) {
        NeighborRow nr;
        RowWeights w;
        for (int i = r0; i < r1; ++i) {
            nr.load(cloud, kernel, i);
            w.compute(nr, cloud, cl, cg, cb);

            std::int64_t a_lap = out.lap ? out.lap->row_start[i] : 0;
            std::int64_t a_grad = out.grad ? out.grad->row_start[i] : 0;
            std::int64_t a_stab = out.stab ? out.stab->row_start[i] : 0;
            std::int64_t a_moll = out.mollify ? out.mollify->row_start[i] : 0;
            int diag_lap = -1, diag_stab = -1;

            for (int s = 0; s < nr.count; ++s) {
                const bool is_self = (s == nr.self);
                const int j = nr.ids[s];
                if (out.lap && (is_self || w.wl[s] >= kDropBelow)) {
                    if (is_self) diag_lap = static_cast<int>(a_lap - out.lap->row_start[i]);
                    out.lap->col[a_lap] = j;
                    out.lap->val[a_lap] = is_self ? 0.0 : w.wl[s];
                    ++a_lap;
                }
                if (out.grad && !is_self) {
                    double mx = 0.0;
                    for (int c = 0; c < dim; ++c)
                        mx = std::max(mx, std::abs(w.wg[s] * nr.dx[s * dim + c]));
                    if (mx >= kDropBelow) {
                        out.grad->col[a_grad] = j;
                        for (int c = 0; c < dim; ++c)
                            out.grad->val[a_grad * dim + c] = w.wg[s] * nr.dx[s * dim + c];
                        ++a_grad;
                    }
                }
                if (out.stab && (is_self || w.wb[s] >= kDropBelow)) {
                    if (is_self) diag_stab = static_cast<int>(a_stab - out.stab->row_start[i]);
                    out.stab->col[a_stab] = j;
                    out.stab->val[a_stab] = is_self ? 0.0 : w.wb[s];
                    ++a_stab;
                }
                if (out.mollify && w.wb[s] >= kDropBelow) {
                    out.mollify->col[a_moll] = j;
                    out.mollify->val[a_moll] = w.wb[s];
                    ++a_moll;
                }
            }

            if (out.lap) {
                const std::int64_t b = out.lap->row_start[i];
                balance_diagonal(out.lap->val.data() + b, static_cast<int>(a_lap - b), diag_lap);
            }
            if (out.stab) {
                const std::int64_t b = out.stab->row_start[i];
                balance_diagonal(out.stab->val.data() + b, static_cast<int>(a_stab - b),
                                 diag_stab);
            }
        }
    });
}

}  // namespace

void NeighborRow::load(const PointCloud& cloud, const ScaledKernel& kernel, int i, bool sorted) {
    cloud.neighbors_into(i, ids, sorted);
    count = static_cast<int>(ids.size());
    const int dim = cloud.dim();
    dx.resize(static_cast<std::size_t>(count) * dim);
    d2.resize(static_cast<std::size_t>(count));
    R.resize(static_cast<std::size_t>(count));
    Rbar.resize(static_cast<std::size_t>(count));
    self = -1;

    const double* xi = cloud.point(i);
    for (int s = 0; s < count; ++s) {
        const int j = ids[s];
        if (j == i) self = s;
        const double* xj = cloud.point(j);
        double acc = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double d = xj[c] - xi[c];
            dx[static_cast<std::size_t>(s) * dim + c] = d;
            acc += d * d;
        }
        d2[static_cast<std::size_t>(s)] = acc;
    }
    kernel.profile_values(d2.data(), R.data(), Rbar.data(), count);
}

SparseMatrix assemble_laplacian(const PointCloud& cloud, const ScaledKernel& kernel) {
    SparseMatrix m;
    Targets t;
    t.lap = &m;
    assemble_into(cloud, kernel, t);
    return m;
}

SparseMatrix assemble_gradient(const PointCloud& cloud, const ScaledKernel& kernel) {
    SparseMatrix m;
    Targets t;
    t.grad = &m;
    assemble_into(cloud, kernel, t);
    return m;
}

SparseMatrix assemble_divergence(const PointCloud& cloud, const ScaledKernel& kernel) {
    // Same entries as the gradient; applications contract them differently.
    return assemble_gradient(cloud, kernel);
}

SparseMatrix assemble_stabilizer(const PointCloud& cloud, const ScaledKernel& kernel) {
    SparseMatrix m;
    Targets t;
    t.stab = &m;
    assemble_into(cloud, kernel, t);
    return m;
}

SparseMatrix assemble_mollifier(const PointCloud& cloud, const ScaledKernel& kernel) {
    SparseMatrix m;
    Targets t;
    t.mollify = &m;
    assemble_into(cloud, kernel, t);
    return m;
}

OperatorSet assemble_operators(const PointCloud& cloud, const ScaledKernel& kernel) {
    OperatorSet set;
    set.cloud = &cloud;
    set.delta = cloud.delta();
    Targets t;
    t.lap = &set.lap;
    t.grad = &set.grad;
    t.stab = &set.stab;
    t.mollify = &set.mollify;
    assemble_into(cloud, kernel, t);
    set.div = set.grad;
    return set;
}

void laplacian_row(const PointCloud& cloud, const ScaledKernel& kernel, int i,
                   const double* field, int ncomp, double* out, NeighborRow& nr) {
    nr.load(cloud, kernel, i);
    const double cl = kernel.c_delta() / (cloud.delta() * cloud.delta());
    double acc[3] = {0.0, 0.0, 0.0};
    const double* fi = field + static_cast<std::int64_t>(i) * ncomp;
    for (int s = 0; s < nr.count; ++s) {
        const double w = (cl * nr.R[s]) * cloud.volume(nr.ids[s]);
        const double* fj = field + static_cast<std::int64_t>(nr.ids[s]) * ncomp;
        for (int c = 0; c < ncomp; ++c) acc[c] += w * (fj[c] - fi[c]);
    }
    for (int c = 0; c < ncomp; ++c) out[c] = acc[c];
}

void mollifier_row(const PointCloud& cloud, const ScaledKernel& kernel, int i,
                   const double* field, int ncomp, double* out, NeighborRow& nr) {
    nr.load(cloud, kernel, i);
    const double cb = kernel.c_delta();
    double acc[3] = {0.0, 0.0, 0.0};
    for (int s = 0; s < nr.count; ++s) {
        const double w = (cb * nr.Rbar[s]) * cloud.volume(nr.ids[s]);
        const double* fj = field + static_cast<std::int64_t>(nr.ids[s]) * ncomp;
        for (int c = 0; c < ncomp; ++c) acc[c] += w * fj[c];
    }
    for (int c = 0; c < ncomp; ++c) out[c] = acc[c];
}

double mollifier_row_sum(const PointCloud& cloud, const ScaledKernel& kernel, int i,
                         NeighborRow& nr) {
    nr.load(cloud, kernel, i);
    const double cb = kernel.c_delta();
    double acc = 0.0;
    for (int s = 0; s < nr.count; ++s) acc += (cb * nr.Rbar[s]) * cloud.volume(nr.ids[s]);
    return acc;
}

void gradient_row(const PointCloud& cloud, const ScaledKernel& kernel, int i, const double* p,
                  double* out, NeighborRow& nr) {
    nr.load(cloud, kernel, i);
    const int dim = cloud.dim();
    const double cg = kernel.c_delta() / (2.0 * cloud.delta() * cloud.delta());
    double acc[3] = {0.0, 0.0, 0.0};
    for (int s = 0; s < nr.count; ++s) {
        const double w = ((cg * nr.R[s]) * cloud.volume(nr.ids[s])) * p[nr.ids[s]];
        for (int c = 0; c < dim; ++c) acc[c] += w * nr.dx[static_cast<std::size_t>(s) * dim + c];
    }
    for (int c = 0; c < dim; ++c) out[c] = acc[c];
}

double divergence_row(const PointCloud& cloud, const ScaledKernel& kernel, int i, const double* u,
                      NeighborRow& nr) {
    nr.load(cloud, kernel, i);
    const int dim = cloud.dim();
    const double cg = kernel.c_delta() / (2.0 * cloud.delta() * cloud.delta());
    double acc = 0.0;
    for (int s = 0; s < nr.count; ++s) {
        const double w = (cg * nr.R[s]) * cloud.volume(nr.ids[s]);
        const double* uj = u + static_cast<std::int64_t>(nr.ids[s]) * dim;
        double dot = 0.0;
        for (int c = 0; c < dim; ++c) dot += nr.dx[static_cast<std::size_t>(s) * dim + c] * uj[c];
        acc += w * dot;
    }
    return acc;
}

double stabilizer_row(const PointCloud& cloud, const ScaledKernel& kernel, int i, const double* p,
                      NeighborRow& nr) {
    nr.load(cloud, kernel, i);
    const double cb = kernel.c_delta();
    double acc = 0.0;
    for (int s = 0; s < nr.count; ++s)
        acc += ((cb * nr.Rbar[s]) * cloud.volume(nr.ids[s])) * (p[nr.ids[s]] - p[i]);
    return acc;
}

}  // namespace nls
