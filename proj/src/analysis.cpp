/**
 * @file analysis.cpp
 * @brief Streamed diagnostics and Poincare eigenvalue estimation.
 */

#include "nlstokes/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "nlstokes/operators/assemble.hpp"

namespace nls {

namespace {

void check_pair(const PointCloud& cloud, const ScaledKernel& kernel) {
    if (cloud.delta() <= 0.0)
        throw ConfigError("cloud is not partitioned; call partition() first");
    if (kernel.dim() != cloud.dim() || kernel.delta() != cloud.delta())
        throw ConfigError("kernel and cloud disagree in dimension or delta");
}

/// Sequentially reduced per-point partial sums: deterministic for any
/// worker count.
double reduce(const std::vector<double>& parts) {
    double s = 0.0;
    for (double v : parts) s += v;
    return s;
}

}  // namespace

double truncation_residual(const ManufacturedCase& mc, const PointCloud& cloud,
                           const ScaledKernel& kernel) {
    check_pair(cloud, kernel);
    const int dim = cloud.dim();
    if (mc.dim != dim) throw ConfigError("case dimension does not match the cloud");

    const std::vector<double> u = sample_velocity(mc, cloud);
    std::vector<double> lap(static_cast<std::size_t>(cloud.size()) * dim);
    for (int i = 0; i < cloud.size(); ++i)
        mc.lap_u(cloud.point(i), &lap[static_cast<std::size_t>(i) * dim]);

    const auto& interior = cloud.interior();
    std::vector<double> parts(interior.size(), 0.0);
    parallel_for(interior.size(), [&](std::size_t r0, std::size_t r1) {
        NeighborRow nr;
        double lu[3], ml[3];
        for (std::size_t r = r0; r < r1; ++r) {
            const int i = interior[r];
            laplacian_row(cloud, kernel, i, u.data(), dim, lu, nr);
            mollifier_row(cloud, kernel, i, lap.data(), dim, ml, nr);
            double r2 = 0.0;
            for (int c = 0; c < dim; ++c) r2 += (lu[c] - ml[c]) * (lu[c] - ml[c]);
            parts[r] = cloud.volume(i) * r2;
        }
    });
    return std::sqrt(reduce(parts));
}

double poincare_quotient_velocity(const PointCloud& cloud, const ScaledKernel& kernel,
                                  const std::vector<double>& field) {
    check_pair(cloud, kernel);
    if (field.size() != static_cast<std::size_t>(cloud.size()))
        throw ValidationError("field size does not match the cloud");
    const double cl = kernel.c_delta() / (cloud.delta() * cloud.delta());

    const auto& interior = cloud.interior();
    std::vector<double> parts(interior.size(), 0.0);
    parallel_for(interior.size(), [&](std::size_t r0, std::size_t r1) {
        NeighborRow nr;
        for (std::size_t r = r0; r < r1; ++r) {
            const int i = interior[r];
            nr.load(cloud, kernel, i);
            const double vi = cloud.volume(i);
            const double fi = field[static_cast<std::size_t>(i)];
            double acc = 0.0;
            for (int s = 0; s < nr.count; ++s) {
                const int j = nr.ids[s];
                if (j == i) continue;
                const double wl = (cl * nr.R[s]) * (vi * cloud.volume(j));
                if (cloud.tag(j) == RegionTag::Interior) {
                    const double d = fi - field[static_cast<std::size_t>(j)];
                    acc += wl * (d * d);
                } else {
                    acc += wl * (fi * fi);  // coupling to the eliminated Layer zeros
                }
            }
            parts[r] = acc;
        }
    });

    double denom = 0.0;
    for (int i : interior)
        denom += cloud.volume(i) * field[static_cast<std::size_t>(i)] *
                 field[static_cast<std::size_t>(i)];
    if (denom <= 0.0) throw ValidationError("velocity quotient of a zero field is undefined");
    return reduce(parts) / denom;
}

double poincare_quotient_pressure(const PointCloud& cloud, const ScaledKernel& kernel,
                                  const std::vector<double>& field) {
    check_pair(cloud, kernel);
    if (field.size() != static_cast<std::size_t>(cloud.size()))
        throw ValidationError("field size does not match the cloud");
    const double cb2 = kernel.c_delta() / (cloud.delta() * cloud.delta());

    std::vector<double> parts(static_cast<std::size_t>(cloud.size()), 0.0);
    parallel_for(static_cast<std::size_t>(cloud.size()), [&](std::size_t i0, std::size_t i1) {
        NeighborRow nr;
        for (std::size_t i = i0; i < i1; ++i) {
            nr.load(cloud, kernel, static_cast<int>(i));
            const double vi = cloud.volume(static_cast<int>(i));
            const double pi = field[i];
            double acc = 0.0;
            for (int s = 0; s < nr.count; ++s) {
                const int j = nr.ids[s];
                const double d = pi - field[static_cast<std::size_t>(j)];
                acc += ((cb2 * nr.Rbar[s]) * (vi * cloud.volume(j))) * (d * d);
            }
            parts[i] = acc;
        }
    });

    double denom = 0.0;
    for (int i = 0; i < cloud.size(); ++i)
        denom += cloud.volume(i) * field[static_cast<std::size_t>(i)] *
                 field[static_cast<std::size_t>(i)];
    if (denom <= 0.0) throw ValidationError("pressure quotient of a zero field is undefined");
    return reduce(parts) / denom;
}

double poincare_constant_velocity(const PointCloud& cloud, const ScaledKernel& kernel,
                                  double rtol) {
    check_pair(cloud, kernel);
    const auto& interior = cloud.interior();
    const int ni = static_cast<int>(interior.size());
    if (ni == 0) throw ValidationError("no interior points; the quotient has no domain");
    const double cl = kernel.c_delta() / (cloud.delta() * cloud.delta());

    std::vector<int> rank(static_cast<std::size_t>(cloud.size()), -1);
    for (int r = 0; r < ni; ++r) rank[static_cast<std::size_t>(interior[r])] = r;

    // Form matrix: u' A u equals the quotient numerator.
    std::vector<Eigen::Triplet<double>> trips;
    NeighborRow nr;
    for (int r = 0; r < ni; ++r) {
        const int i = interior[static_cast<std::size_t>(r)];
        nr.load(cloud, kernel, i);
        const double vi = cloud.volume(i);
        double diag = 0.0;
        for (int s = 0; s < nr.count; ++s) {
            const int j = nr.ids[s];
            if (j == i) continue;
            const double wl = (cl * nr.R[s]) * (vi * cloud.volume(j));
            const int rj = rank[static_cast<std::size_t>(j)];
            if (rj >= 0) {
                trips.emplace_back(r, rj, -2.0 * wl);
                diag += 2.0 * wl;
            } else {
                diag += wl;
            }
        }
        trips.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> a(ni, ni);
    a.setFromTriplets(trips.begin(), trips.end());
    trips.clear();
    trips.shrink_to_fit();

    Eigen::VectorXd mdiag(ni);
    for (int r = 0; r < ni; ++r) mdiag[r] = cloud.volume(interior[static_cast<std::size_t>(r)]);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(a);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("velocity Poincare form could not be factorized");

    Eigen::VectorXd x = Eigen::VectorXd::Ones(ni);
    x /= std::sqrt(x.dot(mdiag.cwiseProduct(x)));
    std::vector<double> history;
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
        Eigen::VectorXd y = ldlt.solve(mdiag.cwiseProduct(x));
        if (ldlt.info() != Eigen::Success)
            throw SolverError("velocity Poincare inverse iteration failed", history);
        y /= std::sqrt(y.dot(mdiag.cwiseProduct(y)));
        const double next = y.dot(a * y);
        history.push_back(next);
        if (it >= 1 && std::abs(next - lam) <= rtol * std::abs(next)) return next;
        lam = next;
        x = y;
    }
    throw SolverError("velocity Poincare iteration stagnated", history);
}

double poincare_constant_pressure(const PointCloud& cloud, const ScaledKernel& kernel,
                                  double rtol) {
    check_pair(cloud, kernel);
    const int n = cloud.size();
    const double cb2 = kernel.c_delta() / (cloud.delta() * cloud.delta());

    // Bordered form matrix: the constraint column (interior volumes) pins
    // the constant null direction of the Rbar form.
    std::vector<Eigen::Triplet<double>> trips;
    NeighborRow nr;
    for (int i = 0; i < n; ++i) {
        nr.load(cloud, kernel, i);
        const double vi = cloud.volume(i);
        double diag = 0.0;
        for (int s = 0; s < nr.count; ++s) {
            const int j = nr.ids[s];
            if (j == i) continue;
            const double wb = (cb2 * nr.Rbar[s]) * (vi * cloud.volume(j));
            trips.emplace_back(i, j, -2.0 * wb);
            diag += 2.0 * wb;
        }
        trips.emplace_back(i, i, diag);
    }
    for (int i : cloud.interior()) {
        trips.emplace_back(i, n, cloud.volume(i));
        trips.emplace_back(n, i, cloud.volume(i));
    }
    Eigen::SparseMatrix<double> b(n + 1, n + 1);
    b.setFromTriplets(trips.begin(), trips.end());
    trips.clear();
    trips.shrink_to_fit();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(b);
    if (lu.info() != Eigen::Success)
        throw SolverError("pressure Poincare form could not be factorized");

    Eigen::VectorXd mdiag(n);
    for (int i = 0; i < n; ++i) mdiag[i] = cloud.volume(i);

    // Dipole start: large overlap with the lowest constrained mode.
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = cloud.point(i)[0];
    x /= std::sqrt(x.dot(mdiag.cwiseProduct(x)));

    std::vector<double> history;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1), by(n + 1), ext(n + 1);
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
        rhs.head(n) = mdiag.cwiseProduct(x);
        Eigen::VectorXd y = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw SolverError("pressure Poincare inverse iteration failed", history);
        Eigen::VectorXd yn = y.head(n);
        yn /= std::sqrt(yn.dot(mdiag.cwiseProduct(yn)));
        // Rayleigh quotient through the bordered product: the head of
        // B [y; 0] is the plain form matrix times y.
        ext.setZero();
        ext.head(n) = yn;
        by = b * ext;
        const double next = yn.dot(by.head(n));
        history.push_back(next);
        if (it >= 1 && std::abs(next - lam) <= rtol * std::abs(next)) return next;
        lam = next;
        x = yn;
    }
    throw SolverError("pressure Poincare iteration stagnated", history);
}

double boundary_layer_norm(const ManufacturedCase& mc, const Domain& domain, double delta,
                           double h) {
    const double h_eff = std::min(h, delta / 10.0);
    const PointCloud cloud = build_cloud(domain, h_eff, delta);
    double acc = 0.0;
    double u[3] = {0.0, 0.0, 0.0};
    for (int i : cloud.layer()) {
        mc.u(cloud.point(i), u);
        double u2 = 0.0;
        for (int c = 0; c < cloud.dim(); ++c) u2 += u[c] * u[c];
        acc += cloud.volume(i) * u2;
    }
    return acc;
}

SolveErrors compare_solution(const ManufacturedCase& mc, const PointCloud& cloud,
                             const ScaledKernel& kernel, const Solution& sol) {
    const int n = cloud.size();
    const int dim = cloud.dim();
    const double cl = kernel.c_delta() / (cloud.delta() * cloud.delta());

    std::vector<double> e = sample_velocity(mc, cloud);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] -= sol.u[k];

    SolveErrors out;
    double l2 = 0.0;
    for (int i : cloud.interior()) {
        double e2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double v = e[static_cast<std::size_t>(i) * dim + c];
            e2 += v * v;
        }
        l2 += cloud.volume(i) * e2;
    }
    out.error_u_l2 = std::sqrt(l2);

    std::vector<double> parts(static_cast<std::size_t>(n), 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0, std::size_t i1) {
        NeighborRow nr;
        for (std::size_t i = i0; i < i1; ++i) {
            nr.load(cloud, kernel, static_cast<int>(i));
            const double vi = cloud.volume(static_cast<int>(i));
            const double* ei = &e[i * dim];
            double acc = 0.0;
            for (int s = 0; s < nr.count; ++s) {
                const int j = nr.ids[s];
                const double* ej = &e[static_cast<std::size_t>(j) * dim];
                double d2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    const double d = ei[c] - ej[c];
                    d2 += d * d;
                }
                acc += ((cl * nr.R[s]) * (vi * cloud.volume(j))) * d2;
            }
            parts[i] = acc;
        }
    });
    out.error_u_energy = std::sqrt(reduce(parts));

    std::vector<double> dp = sample_pressure(mc, cloud);
    for (int i = 0; i < n; ++i) dp[static_cast<std::size_t>(i)] -= sol.p[i];
    double mean = 0.0, vol = 0.0;
    for (int i : cloud.interior()) {
        mean += cloud.volume(i) * dp[static_cast<std::size_t>(i)];
        vol += cloud.volume(i);
    }
    mean /= vol;
    double pl2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = dp[static_cast<std::size_t>(i)] - mean;
        pl2 += cloud.volume(i) * d * d;
    }
    out.error_p_l2 = std::sqrt(pl2);
    return out;
}

SolveErrors solve_errors(const ManufacturedCase& mc, const KernelProfile& profile, double delta,
                         double h, const SolverOptions& options) {
    const Domain dom = Domain::unit_disk();
    const PointCloud cloud = build_cloud(dom, h, delta);
    const ScaledKernel kernel(profile, mc.dim, delta);

    NonlocalStokesProblem pb;
    pb.cloud = &cloud;
    pb.kernel = &kernel;
    pb.f = sample_forcing(mc, cloud);
    pb.options = options;

    const AssembledSystem sys = assemble_system(pb);
    const Solution sol = solve(sys, options);
    return compare_solution(mc, cloud, kernel, sol);
}

}  // namespace nls
