/**
 * @file solve.cpp
 * @brief Direct and Krylov solution paths for the assembled saddle system.
 *
 * Direct path: sparse LU on an exact copy of the CSR data. The matrix is
 * symmetric, so handing the row storage to a column-major solver reads the
 * transpose of the same matrix; no conversion pass is needed. One or two
 * iterative-refinement sweeps keep the residual well inside the contract.
 *
 * Krylov path: preconditioned MINRES (Paige/Saunders recurrence). The
 * preconditioner is diagonal, |a_ii| with the multiplier row floored by the
 * 2-norm of the constraint row, which matches the usual mass/stiffness
 * block scaling of saddle Stokes systems. The iteration monitors the
 * preconditioned residual estimate and only reports convergence after the
 * true unpreconditioned residual meets the tolerance.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "nlstokes/simd/simd_ops.hpp"
#include "nlstokes/system/system.hpp"

namespace nls {

namespace {

double norm2(const std::vector<double>& v) {
    return std::sqrt(simd::active().nrm2sq(v.data(), v.size()));
}

/// ||A x - b|| / max(||b||, tiny), the contract residual of both paths.
double relative_residual(const AssembledSystem& sys, const std::vector<double>& x,
                         std::vector<double>& work) {
    work.resize(x.size());
    sys.matrix.apply(x.data(), work.data());
    simd::active().axpy(-1.0, sys.rhs.data(), work.data(), work.size());
    const double nb = norm2(sys.rhs);
    return norm2(work) / std::max(nb, 1e-300);
}

Solution extract(const AssembledSystem& sys, const std::vector<double>& x, const char* method,
                 int iterations, double residual) {
    Solution sol;
    sol.method = method;
    sol.iterations = iterations;
    sol.residual = residual;
    const int dim = sys.dim;
    sol.u.assign(static_cast<std::size_t>(sys.n_points) * dim, 0.0);
    for (int r = 0; r < sys.n_interior; ++r) {
        const int i = sys.interior[static_cast<std::size_t>(r)];
        for (int c = 0; c < dim; ++c)
            sol.u[static_cast<std::size_t>(i) * dim + c] =
                x[static_cast<std::size_t>(r) * dim + c];
    }
    const std::size_t p0 = static_cast<std::size_t>(dim) * sys.n_interior;
    sol.p.assign(x.begin() + static_cast<std::ptrdiff_t>(p0),
                 x.begin() + static_cast<std::ptrdiff_t>(p0 + sys.n_points));
    sol.lambda = x[p0 + static_cast<std::size_t>(sys.n_points)];
    return sol;
}

Solution solve_direct(const AssembledSystem& sys) {
    const std::int64_t nu = sys.unknowns;
    const std::int64_t nnz = sys.matrix.entries();
    if (nu > std::numeric_limits<int>::max() || nnz > std::numeric_limits<int>::max())
        throw SolverError("system too large for the direct path; use the Krylov solver");

    using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    std::vector<int> outer(static_cast<std::size_t>(nu) + 1);
    for (std::int64_t k = 0; k <= nu; ++k)
        outer[static_cast<std::size_t>(k)] =
            static_cast<int>(sys.matrix.row_start[static_cast<std::size_t>(k)]);
    Eigen::Map<const SpMat> view(static_cast<int>(nu), static_cast<int>(nu),
                                 static_cast<int>(nnz), outer.data(), sys.matrix.col.data(),
                                 sys.matrix.val.data());
    SpMat a = view;

    Eigen::SparseLU<SpMat> lu;
    lu.isSymmetric(true);
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());

    Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), nu);
    Eigen::VectorXd xe = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU back-substitution failed");

    std::vector<double> x(xe.data(), xe.data() + nu);
    std::vector<double> work;
    double rel = relative_residual(sys, x, work);

    // Iterative refinement: work holds A x - b, so the correction solve
    // targets -work. Two sweeps cover the rare ill-conditioned factor.
    for (int sweep = 0; sweep < 2 && rel > 1e-12; ++sweep) {
        Eigen::Map<Eigen::VectorXd> r(work.data(), nu);
        Eigen::VectorXd dx = lu.solve(r);
        if (lu.info() != Eigen::Success) break;
        for (std::int64_t k = 0; k < nu; ++k)
            x[static_cast<std::size_t>(k)] -= dx[k];
        rel = relative_residual(sys, x, work);
    }

    if (rel > 1e-10)
        throw SolverError("direct solve residual " + format_g17(rel) +
                              " exceeds the 1e-10 contract",
                          {rel});
    return extract(sys, x, "direct", 0, rel);
}

Solution solve_minres(const AssembledSystem& sys, const SolverOptions& opt) {
    const auto& ops = simd::active();
    const std::size_t n = static_cast<std::size_t>(sys.unknowns);
    const double rtol = opt.rtol;
    const int max_iter = opt.max_iter > 0 ? opt.max_iter : 20000;

    // Diagonal preconditioner. The multiplier row has a zero diagonal; its
    // natural scale is the 2-norm of the constraint row.
    std::vector<double> dinv(n, 1.0);
    {
        const SparseMatrix& m = sys.matrix;
        double vnorm2 = 0.0;
        for (int i = 0; i < sys.n_points; ++i) {
            const double vi = sys.cloud->volume(i);
            vnorm2 += vi * vi;
        }
        const double floor_val = std::sqrt(vnorm2);
        for (std::size_t row = 0; row < n; ++row) {
            double d = 0.0;
            const std::int64_t b = m.row_start[row], e = m.row_start[row + 1];
            const int* lo = m.col.data() + b;
            const int* hi = m.col.data() + e;
            const int* it = std::lower_bound(lo, hi, static_cast<int>(row));
            if (it != hi && *it == static_cast<int>(row)) d = m.val[b + (it - lo)];
            d = std::max(std::abs(d), floor_val > 0.0 ? floor_val : 1.0);
            dinv[row] = 1.0 / d;
        }
    }

    std::vector<double> x(n, 0.0), history;
    const double nb = norm2(sys.rhs);
    std::vector<double> work;
    if (nb == 0.0) return extract(sys, x, "krylov", 0, 0.0);

    std::vector<double> r1 = sys.rhs, r2 = sys.rhs, y(n), v(n);
    std::vector<double> w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) y[k] = sys.rhs[k] * dinv[k];

    double beta1 = ops.dot(sys.rhs.data(), y.data(), n);
    if (!(beta1 > 0.0)) throw SolverError("preconditioner is not positive definite");
    beta1 = std::sqrt(beta1);

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    double inner_tol = rtol;
    int itn = 0;
    bool converged = false;

    while (itn < max_iter) {
        ++itn;
        const double s = 1.0 / beta;
        for (std::size_t k = 0; k < n; ++k) v[k] = s * y[k];
        sys.matrix.apply(v.data(), y.data());
        if (itn >= 2) ops.axpy(-(beta / oldb), r1.data(), y.data(), n);
        const double alfa = ops.dot(v.data(), y.data(), n);
        ops.axpy(-(alfa / beta), r2.data(), y.data(), n);
        r1.swap(r2);
        r2.swap(y);
        for (std::size_t k = 0; k < n; ++k) y[k] = r2[k] * dinv[k];
        oldb = beta;
        beta = ops.dot(r2.data(), y.data(), n);
        if (!std::isfinite(beta) || beta < 0.0)
            throw SolverError("MINRES breakdown: preconditioned inner product " +
                                  format_g17(beta),
                              history);
        beta = std::sqrt(beta);

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::sqrt(gbar * gbar + beta * beta);
        gamma = std::max(gamma, 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        const double denom = 1.0 / gamma;
        w1.swap(w2);
        w2.swap(w);
        for (std::size_t k = 0; k < n; ++k)
            w[k] = (v[k] - oldeps * w1[k] - delta * w2[k]) * denom;
        ops.axpy(phi, w.data(), x.data(), n);

        const double est = phibar / beta1;
        history.push_back(est);
        if (!std::isfinite(est)) throw SolverError("MINRES residual estimate diverged", history);

        if (est <= inner_tol || beta <= 1e-14 * beta1) {
            const double true_rel = relative_residual(sys, x, work);
            if (true_rel <= rtol) {
                history.push_back(true_rel);
                converged = true;
                break;
            }
            if (beta <= 1e-14 * beta1)
                throw SolverError("MINRES stagnated at relative residual " +
                                      format_g17(true_rel),
                                  history);
            // Preconditioned estimate and true residual disagree; tighten
            // the internal target and keep iterating.
            inner_tol = std::min(inner_tol, est) / 4.0;
        }
    }

    if (!converged) {
        const double true_rel = relative_residual(sys, x, work);
        throw SolverError("MINRES did not reach rtol " + format_g17(rtol) + " within " +
                              std::to_string(max_iter) + " iterations (residual " +
                              format_g17(true_rel) + ")",
                          history);
    }
    return extract(sys, x, "krylov", itn, history.back());
}

}  // namespace

Solution solve(const AssembledSystem& sys, const SolverOptions& opt) {
    auto method = opt.method;
    if (method == SolverOptions::Method::Auto)
        method = sys.unknowns <= kDirectUnknownLimit ? SolverOptions::Method::Direct
                                                     : SolverOptions::Method::Krylov;
    Solution sol =
        method == SolverOptions::Method::Direct ? solve_direct(sys) : solve_minres(sys, opt);
    sol.energy_gap = energy_identity_gap(sol, sys);
    return sol;
}

}  // namespace nls
