/**
 * @file system.cpp
 * @brief One-sweep assembly of the saddle system plus solution diagnostics.
 *
 * Every matrix entry is formed as (scale * profile) * (V_i * V_j). Both
 * factors are invariant under swapping i and j (the squared distance, and
 * with it the profile value, comes out bit-identical from either row), so
 * the assembled matrix is exactly symmetric, not merely symmetric up to
 * rounding. The divergence block is written as the negated transpose of the
 * gradient block entry by entry; IEEE negation is exact, so no tolerance is
 * involved there either.
 */

#include "nlstokes/system/system.hpp"

#include <algorithm>
#include <cmath>

#include "nlstokes/operators/assemble.hpp"

namespace nls {

namespace {

// Same structural-zero threshold as the operator assemblers.
constexpr double kDropBelow = 1e-300;

// Keep the stored row sum of a zero-row-sum segment at bit-zero in CSR
// traversal order (same scheme as the operator assembly): seed the diagonal
// with the negated off-diagonal sum, then absorb the in-order residual.
void balance_segment(double* v, int k, int diag) {
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

void check_problem(const NonlocalStokesProblem& pb) {
    if (!pb.cloud || !pb.kernel) throw ConfigError("problem is missing a cloud or a kernel");
    const PointCloud& cloud = *pb.cloud;
    const ScaledKernel& kernel = *pb.kernel;
    if (cloud.delta() <= 0.0)
        throw ConfigError("cloud is not partitioned; call partition() before assembly");
    if (kernel.dim() != cloud.dim())
        throw ConfigError("kernel dimension " + std::to_string(kernel.dim()) +
                          " does not match cloud dimension " + std::to_string(cloud.dim()));
    if (kernel.delta() != cloud.delta())
        throw ConfigError("kernel delta " + format_g17(kernel.delta()) +
                          " does not match cloud delta " + format_g17(cloud.delta()));
    if (cloud.interior().empty())
        throw ValidationError("partition has no interior points; no momentum unknowns");

    const std::size_t want = static_cast<std::size_t>(cloud.size()) * cloud.dim();
    if (pb.f.size() != want)
        throw ValidationError("forcing has " + std::to_string(pb.f.size()) +
                              " values, expected " + std::to_string(want));
    if (!all_finite(pb.f.data(), pb.f.size()))
        throw ValidationError("forcing contains a non-finite value");
}

/// Pairwise weights for one system row: profile times V_i * V_j, so that the
/// entry is a symmetric function of the pair.
struct PairWeights {
    std::vector<double> wl, wg, wb;

    void compute(const NeighborRow& nr, const PointCloud& cloud, int i, double cl, double cg,
                 double cb) {
        const std::size_t k = static_cast<std::size_t>(nr.count);
        wl.resize(k);
        wg.resize(k);
        wb.resize(k);
        const double vi = cloud.volume(i);
        for (std::size_t s = 0; s < k; ++s) {
            const double vv = vi * cloud.volume(nr.ids[s]);
            wl[s] = (cl * nr.R[s]) * vv;
            wg[s] = (cg * nr.R[s]) * vv;
            wb[s] = (cb * nr.Rbar[s]) * vv;
        }
    }
};

}  // namespace

AssembledSystem assemble_system(const NonlocalStokesProblem& pb) {
    check_problem(pb);
    const PointCloud& cloud = *pb.cloud;
    const ScaledKernel& kernel = *pb.kernel;

    AssembledSystem sys;
    sys.cloud = &cloud;
    sys.kernel = &kernel;
    sys.dim = cloud.dim();
    sys.n_points = cloud.size();
    sys.n_interior = static_cast<int>(cloud.interior().size());
    sys.interior = cloud.interior();
    sys.unknowns = static_cast<std::int64_t>(sys.dim) * sys.n_interior + sys.n_points + 1;

    const int dim = sys.dim;
    const int n = sys.n_points;
    const int ni = sys.n_interior;
    const std::int64_t p0 = static_cast<std::int64_t>(dim) * ni;  // first pressure row
    const std::int64_t l0 = p0 + n;                               // multiplier row

    sys.rank_of.assign(static_cast<std::size_t>(n), -1);
    for (int r = 0; r < ni; ++r) sys.rank_of[static_cast<std::size_t>(sys.interior[r])] = r;

    // Mollified forcing; feeds the right-hand side and later the energy gap.
    sys.mf.assign(static_cast<std::size_t>(n) * dim, 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0, std::size_t i1) {
        NeighborRow nr;
        for (std::size_t i = i0; i < i1; ++i)
            mollifier_row(cloud, kernel, static_cast<int>(i), pb.f.data(), dim,
                          &sys.mf[i * dim], nr);
    });

    sys.rhs.assign(static_cast<std::size_t>(sys.unknowns), 0.0);
    for (int r = 0; r < ni; ++r) {
        const int i = sys.interior[static_cast<std::size_t>(r)];
        const double vi = cloud.volume(i);
        for (int c = 0; c < dim; ++c)
            sys.rhs[static_cast<std::size_t>(r) * dim + c] =
                -(vi * sys.mf[static_cast<std::size_t>(i) * dim + c]);
    }

    SparseMatrix& m = sys.matrix;
    m.rows = static_cast<int>(sys.unknowns);
    m.cols = m.rows;
    m.block = 1;
    m.row_start.assign(static_cast<std::size_t>(sys.unknowns) + 1, 0);

    const double delta = cloud.delta();
    const double cl = kernel.c_delta() / (delta * delta);
    const double cg = kernel.c_delta() / (2.0 * delta * delta);
    const double cb = kernel.c_delta();

    // Pass 1: entry counts. Keep decisions depend only on the symmetric pair
    // weights, so a coupling survives in a row exactly when its transpose
    // survives in the partner row.
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0, std::size_t i1) {
        NeighborRow nr;
        PairWeights w;
        for (std::size_t iu = i0; iu < i1; ++iu) {
            const int i = static_cast<int>(iu);
            nr.load(cloud, kernel, i);
            w.compute(nr, cloud, i, cl, cg, cb);

            std::int64_t n_uu = 0;   // velocity couplings of a momentum row (one component)
            std::int64_t n_up = 0;   // pressure couplings of a momentum row
            std::int64_t n_pu = 0;   // interior neighbors coupled into the continuity row
            std::int64_t n_pp = 0;   // pressure couplings of the continuity row
            for (int s = 0; s < nr.count; ++s) {
                const int j = nr.ids[s];
                const bool is_self = (j == i);
                const bool j_int = sys.rank_of[static_cast<std::size_t>(j)] >= 0;
                if (is_self || (j_int && w.wl[s] >= kDropBelow)) ++n_uu;
                if (!is_self && w.wg[s] >= kDropBelow) {
                    ++n_up;
                    if (j_int) ++n_pu;
                }
                if (is_self || w.wb[s] >= kDropBelow) ++n_pp;
            }

            const int r = sys.rank_of[iu];
            if (r >= 0)
                for (int c = 0; c < dim; ++c)
                    m.row_start[static_cast<std::size_t>(r) * dim + c + 1] = n_uu + n_up;
            m.row_start[static_cast<std::size_t>(p0 + i) + 1] = dim * n_pu + n_pp + 1;
        }
    });
    m.row_start[static_cast<std::size_t>(l0) + 1] = n;

    for (std::int64_t row = 0; row < sys.unknowns; ++row)
        m.row_start[static_cast<std::size_t>(row) + 1] +=
            m.row_start[static_cast<std::size_t>(row)];
    const std::int64_t nnz = m.row_start[static_cast<std::size_t>(sys.unknowns)];
    m.col.resize(static_cast<std::size_t>(nnz));
    m.val.resize(static_cast<std::size_t>(nnz));

    // Pass 2: fill. Neighbor ids arrive ascending and interior ranks are
    // ascending in id, so every segment is written in ascending column order.
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0, std::size_t i1) {
        NeighborRow nr;
        PairWeights w;
        for (std::size_t iu = i0; iu < i1; ++iu) {
            const int i = static_cast<int>(iu);
            nr.load(cloud, kernel, i);
            w.compute(nr, cloud, i, cl, cg, cb);
            const int r = sys.rank_of[iu];

            if (r >= 0) {
                // Momentum rows: -V_i (L u)_i + V_i (G p)_i = -V_i (M f)_i.
                // The diagonal keeps the full neighbor mass, Layer neighbors
                // included: that is the eliminated no-slip coupling.
                double diag = 0.0;
                for (int s = 0; s < nr.count; ++s)
                    if (nr.ids[s] != i && w.wl[s] >= kDropBelow) diag += w.wl[s];

                for (int c = 0; c < dim; ++c) {
                    const std::int64_t row = static_cast<std::int64_t>(r) * dim + c;
                    std::int64_t a = m.row_start[static_cast<std::size_t>(row)];
                    for (int s = 0; s < nr.count; ++s) {
                        const int j = nr.ids[s];
                        const int rj = sys.rank_of[static_cast<std::size_t>(j)];
                        if (j == i) {
                            m.col[a] = static_cast<int>(static_cast<std::int64_t>(r) * dim + c);
                            m.val[a] = diag;
                            ++a;
                        } else if (rj >= 0 && w.wl[s] >= kDropBelow) {
                            m.col[a] = static_cast<int>(static_cast<std::int64_t>(rj) * dim + c);
                            m.val[a] = -w.wl[s];
                            ++a;
                        }
                    }
                    for (int s = 0; s < nr.count; ++s) {
                        if (nr.ids[s] == i || w.wg[s] < kDropBelow) continue;
                        m.col[a] = static_cast<int>(p0 + nr.ids[s]);
                        m.val[a] = w.wg[s] * nr.dx[static_cast<std::size_t>(s) * dim + c];
                        ++a;
                    }
                }
            }

            // Continuity row: -V_i (D u)_i + V_i (S p)_i + V_i lambda = 0.
            // The velocity block is the negated transpose of the momentum
            // rows' pressure block.
            {
                const std::int64_t row = p0 + i;
                std::int64_t a = m.row_start[static_cast<std::size_t>(row)];
                for (int s = 0; s < nr.count; ++s) {
                    const int j = nr.ids[s];
                    const int rj = sys.rank_of[static_cast<std::size_t>(j)];
                    if (j == i || rj < 0 || w.wg[s] < kDropBelow) continue;
                    for (int c = 0; c < dim; ++c) {
                        m.col[a] = static_cast<int>(static_cast<std::int64_t>(rj) * dim + c);
                        m.val[a] = -(w.wg[s] * nr.dx[static_cast<std::size_t>(s) * dim + c]);
                        ++a;
                    }
                }
                const std::int64_t pseg = a;
                int diag_at = -1;
                for (int s = 0; s < nr.count; ++s) {
                    const int j = nr.ids[s];
                    if (j == i) {
                        diag_at = static_cast<int>(a - pseg);
                        m.col[a] = static_cast<int>(p0 + j);
                        m.val[a] = 0.0;
                        ++a;
                    } else if (w.wb[s] >= kDropBelow) {
                        m.col[a] = static_cast<int>(p0 + j);
                        m.val[a] = w.wb[s];
                        ++a;
                    }
                }
                balance_segment(m.val.data() + pseg, static_cast<int>(a - pseg), diag_at);
                m.col[a] = static_cast<int>(l0);
                m.val[a] = cloud.volume(i);
            }
        }
    });

    // Constraint row sum_i V_i p_i = 0; equals the multiplier column.
    {
        std::int64_t a = m.row_start[static_cast<std::size_t>(l0)];
        for (int j = 0; j < n; ++j) {
            m.col[a] = static_cast<int>(p0 + j);
            m.val[a] = cloud.volume(j);
            ++a;
        }
    }

    return sys;
}

double energy_identity_gap(const Solution& sol, const AssembledSystem& sys) {
    const PointCloud& cloud = *sys.cloud;
    const ScaledKernel& kernel = *sys.kernel;
    const int n = sys.n_points;
    const int dim = sys.dim;
    const double delta = cloud.delta();
    const double cl = kernel.c_delta() / (delta * delta);
    const double cb = kernel.c_delta();

    // Per-point partial sums, reduced sequentially afterwards so the result
    // does not depend on the worker count.
    std::vector<double> eu(static_cast<std::size_t>(n), 0.0);
    std::vector<double> ep(static_cast<std::size_t>(n), 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0, std::size_t i1) {
        NeighborRow nr;
        for (std::size_t i = i0; i < i1; ++i) {
            nr.load(cloud, kernel, static_cast<int>(i));
            const double vi = cloud.volume(static_cast<int>(i));
            const double* ui = &sol.u[i * dim];
            const double pi = sol.p[i];
            double au = 0.0, ap = 0.0;
            for (int s = 0; s < nr.count; ++s) {
                const int j = nr.ids[s];
                const double vv = vi * cloud.volume(j);
                const double* uj = &sol.u[static_cast<std::size_t>(j) * dim];
                double du2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    const double d = ui[c] - uj[c];
                    du2 += d * d;
                }
                au += ((cl * nr.R[s]) * vv) * du2;
                const double dp = pi - sol.p[j];
                ap += ((cb * nr.Rbar[s]) * vv) * (dp * dp);
            }
            eu[i] = au;
            ep[i] = ap;
        }
    });

    double e_u = 0.0, e_p = 0.0, f0 = 0.0;
    for (int i = 0; i < n; ++i) {
        e_u += eu[static_cast<std::size_t>(i)];
        e_p += ep[static_cast<std::size_t>(i)];
        double dot = 0.0;
        for (int c = 0; c < dim; ++c)
            dot += sys.mf[static_cast<std::size_t>(i) * dim + c] *
                   sol.u[static_cast<std::size_t>(i) * dim + c];
        f0 += cloud.volume(i) * dot;
    }

    return std::abs(e_u + e_p + 2.0 * f0) / std::max(e_u, 1e-300);
}

double stability_ratio(const Solution& sol, const NonlocalStokesProblem& pb) {
    check_problem(pb);
    const PointCloud& cloud = *pb.cloud;
    const int n = cloud.size();
    const int dim = cloud.dim();

    double nu = 0.0, np = 0.0, nf = 0.0;
    for (int i = 0; i < n; ++i) {
        const double vi = cloud.volume(i);
        double u2 = 0.0, f2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double uc = sol.u[static_cast<std::size_t>(i) * dim + c];
            const double fc = pb.f[static_cast<std::size_t>(i) * dim + c];
            u2 += uc * uc;
            f2 += fc * fc;
        }
        nu += vi * u2;
        np += vi * sol.p[i] * sol.p[i];
        nf += vi * f2;
    }
    if (nf <= 0.0)
        throw ValidationError("stability ratio undefined: forcing has zero discrete L2 norm");
    return (std::sqrt(nu) + std::sqrt(np)) / std::sqrt(nf);
}

}  // namespace nls
