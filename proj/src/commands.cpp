/**
 * @file commands.cpp
 * @brief Command implementations: solve, study, check, info.
 *
 * Each command validates its config, claims the output directory (so an
 * overwrite refusal fires before any heavy compute), runs, and writes its
 * report bundle with a manifest. All user-visible payloads are deterministic
 * for a fixed config and seed under the direct solver; wall-clock timings
 * appear only inside JSON metadata.
 */

#include "nlstokes/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "json.hpp"
#include "nlstokes/analysis/analysis.hpp"
#include "nlstokes/cli/reports.hpp"
#include "nlstokes/operators/assemble.hpp"

namespace nls {

namespace {

using nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/** Deterministic uniform variates in [-1, 1) for randomized property rows. */
struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double operator()() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return -1.0 + 2.0 * static_cast<double>(s >> 11) / 9007199254740992.0;
    }
};

double lattice_spacing(const RunConfig& cfg, double delta) {
    const double h = cfg.coupling.h_of_delta(delta);
    if (!(h > 0.0) || !std::isfinite(h))
        throw ConfigError("config key \"coupling\": spacing h(" + format_g17(delta) +
                          ") = " + format_g17(h) + " must be positive and finite");
    return h;
}

/** Forcing samples at every cloud point, dim-interleaved. */
std::vector<double> make_forcing(const RunConfig& cfg, const PointCloud& cloud);

/** Nearest-neighbor ingestion of a (x1..xn, f1..fn) CSV table. */
std::vector<double> load_forcing_table(const std::string& path, const PointCloud& cloud) {
    const int dim = cloud.dim();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read forcing table \"" + path + "\"");

    std::vector<double> pts, vals;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> fields;
        bool numeric = true;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                numeric = false;
                break;
            }
            fields.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!numeric) {
            if (lineno == 1) continue;  // header row
            throw ConfigError("forcing table \"" + path + "\" line " + std::to_string(lineno) +
                              ": non-numeric field");
        }
        if (static_cast<int>(fields.size()) != 2 * dim)
            throw ConfigError("forcing table \"" + path + "\" line " + std::to_string(lineno) +
                              ": expected " + std::to_string(2 * dim) + " fields, got " +
                              std::to_string(fields.size()));
        for (int d = 0; d < dim; ++d) pts.push_back(fields[d]);
        for (int d = 0; d < dim; ++d) vals.push_back(fields[dim + d]);
    }
    if (pts.empty()) throw ConfigError("forcing table \"" + path + "\": no data rows");
    if (!all_finite(pts.data(), pts.size()) || !all_finite(vals.data(), vals.size()))
        throw ValidationError("forcing table \"" + path + "\": non-finite value");

    // Nearest sample wins; ties go to the earlier row, so the result does
    // not depend on traversal order.
    const int m = static_cast<int>(pts.size()) / dim;
    const int n = cloud.size();
    std::vector<double> f(static_cast<std::size_t>(n) * dim);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double* x = cloud.point(static_cast<int>(i));
            int best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (int j = 0; j < m; ++j) {
                double d2 = 0.0;
                for (int d = 0; d < dim; ++d) {
                    const double t = pts[static_cast<std::size_t>(j) * dim + d] - x[d];
                    d2 += t * t;
                }
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = j;
                }
            }
            for (int d = 0; d < dim; ++d)
                f[i * dim + d] = vals[static_cast<std::size_t>(best) * dim + d];
        }
    });
    return f;
}

std::vector<double> make_forcing(const RunConfig& cfg, const PointCloud& cloud) {
    if (!cfg.forcing_table.empty()) return load_forcing_table(cfg.forcing_table, cloud);
    if (cfg.case_name == "zero")
        return std::vector<double>(static_cast<std::size_t>(cloud.size()) * cloud.dim(), 0.0);
    return sample_forcing(builtin_case(cfg.case_name), cloud);
}

double vnorm2(const PointCloud& cloud, const std::vector<double>& field, int ncomp) {
    double s = 0.0;
    for (int i = 0; i < cloud.size(); ++i)
        for (int c = 0; c < ncomp; ++c) {
            const double v = field[static_cast<std::size_t>(i) * ncomp + c];
            s += cloud.volume(i) * v * v;
        }
    return std::sqrt(s);
}

// -------------------------------------------------------------------------
// solve
// -------------------------------------------------------------------------

int run_solve(const RunConfig& cfg, OutputDir& out) {
    const Domain dom = Domain::by_name(cfg.domain);
    const double delta = cfg.deltas.front();
    const double h = lattice_spacing(cfg, delta);
    const KernelProfile profile = config_profile(cfg);

    const PointCloud cloud = build_cloud(dom, h, delta);
    const ScaledKernel kernel(profile, dom.dim(), delta);

    NonlocalStokesProblem problem;
    problem.cloud = &cloud;
    problem.kernel = &kernel;
    problem.f = make_forcing(cfg, cloud);
    problem.options = cfg.solver;

    auto t0 = std::chrono::steady_clock::now();
    const AssembledSystem asys = assemble_system(problem);
    const double assemble_seconds = seconds_since(t0);

    ordered_json diag;
    diag["status"] = "ok";
    diag["case"] = cfg.forcing_table.empty() ? cfg.case_name : "forcing-table";
    diag["domain"] = dom.name();
    diag["kernel"] = profile.name();
    diag["delta"] = delta;
    diag["h"] = h;
    diag["n_points"] = asys.n_points;
    diag["n_interior"] = asys.n_interior;
    diag["unknowns"] = asys.unknowns;

    t0 = std::chrono::steady_clock::now();
    Solution sol;
    std::string failure;
    std::vector<double> history;
    try {
        sol = solve(asys, cfg.solver);
    } catch (const SolverError& e) {
        failure = e.what();
        history = e.history;
    }
    const double solve_seconds = seconds_since(t0);

    if (!failure.empty()) {
        diag["status"] = "solver-failure";
        diag["message"] = failure;
        ordered_json tail = ordered_json::array();
        const std::size_t from = history.size() > 10 ? history.size() - 10 : 0;
        for (std::size_t k = from; k < history.size(); ++k) tail.push_back(history[k]);
        diag["residual_history_tail"] = tail;
        diag["timings"] = {{"assemble_seconds", assemble_seconds},
                           {"solve_seconds", solve_seconds}};
        diag["version"] = kVersion;
        out.write_text("diagnostics.json", diag.dump(2) + "\n");
        out.write_text("config.json", config_echo_json(cfg));
        out.write_manifest("solve");
        return 3;
    }

    diag["method"] = sol.method;
    diag["iterations"] = sol.iterations;
    diag["residual"] = sol.residual;
    diag["energy_gap"] = sol.energy_gap;
    const double fnorm = vnorm2(cloud, problem.f, dom.dim());
    if (fnorm > 0.0)
        diag["stability_ratio"] = stability_ratio(sol, problem);
    else
        diag["stability_ratio"] = nullptr;
    if (cfg.forcing_table.empty() && cfg.case_name != "zero") {
        const SolveErrors err = compare_solution(builtin_case(cfg.case_name), cloud, kernel, sol);
        diag["errors"] = {{"u_l2", err.error_u_l2},
                          {"u_energy", err.error_u_energy},
                          {"p_l2", err.error_p_l2}};
    }
    diag["timings"] = {{"assemble_seconds", assemble_seconds}, {"solve_seconds", solve_seconds}};
    diag["version"] = kVersion;

    out.write_text("solution.csv", solution_csv(cloud, sol));
    out.write_text("diagnostics.json", diag.dump(2) + "\n");
    out.write_text("config.json", config_echo_json(cfg));
    out.write_manifest("solve");
    return 0;
}

// -------------------------------------------------------------------------
// check suites
// -------------------------------------------------------------------------

struct CheckRow {
    std::string suite;
    std::string name;
    std::string measured;
    std::string threshold;
    bool pass = false;
};

std::string fmt_e(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void add_row(std::vector<CheckRow>& rows, const std::string& suite, const std::string& name,
             double measured, const std::string& threshold, bool pass) {
    rows.push_back(CheckRow{suite, name, fmt_e(measured), threshold, pass});
}

/**
 * Independent normalization quadrature in the radial variable t = |z|:
 * S_n C_delta int_0^{2 delta} Rbar(t^2/4 delta^2) t^(n-1) dt, segmented at
 * the profile breakpoints. The library computes alpha in the dimensionless
 * variable; agreement checks the whole scaling chain.
 */
double mass_by_radial_quadrature(const KernelProfile& profile, const ScaledKernel& kernel) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    const int n = kernel.dim();
    const double delta = kernel.delta();
    const double sphere = n == 1 ? 2.0 : (n == 2 ? 2.0 * M_PI : 4.0 * M_PI);
    const auto integrand = [&](double t) {
        return profile.Rbar(t * t / (4.0 * delta * delta)) * std::pow(t, n - 1);
    };
    double total = 0.0;
    double prev = 0.0;
    for (double b : profile.breakpoints()) {
        const double t = 2.0 * delta * std::sqrt(b);
        if (t > prev) total += quad::integrate(integrand, prev, t, 12, 1e-14);
        prev = t;
    }
    const double edge = 2.0 * delta;
    if (edge > prev) total += quad::integrate(integrand, prev, edge, 12, 1e-14);
    return sphere * kernel.c_delta() * total;
}

void suite_kernels(const RunConfig& cfg, std::vector<CheckRow>& rows) {
    const KernelProfile profile = config_profile(cfg);
    const double delta = cfg.deltas.front();

    for (int n : {1, 2}) {
        const ScaledKernel kernel(profile, n, delta);
        const double mass = mass_by_radial_quadrature(profile, kernel);
        add_row(rows, "kernels", "normalization-n" + std::to_string(n), mass,
                "|. - 1| <= 1e-10", std::abs(mass - 1.0) <= 1e-10);
    }

    const ScaledKernel kernel(profile, 2, delta);
    const double moment = kernel.second_moment();
    add_row(rows, "kernels", "second-moment", moment, "|. - 1| <= 1e-10",
            std::abs(moment - 1.0) <= 1e-10);

    const ScaledKernel half(profile, 2, delta / 2.0);
    const double b0 = kernel.stabilizer_coefficient();
    const double b1 = half.stabilizer_coefficient();
    const double drift = std::abs(b0 - b1) / std::abs(b0);
    add_row(rows, "kernels", "stabilizer-scale-invariance", drift, "<= 1e-10", drift <= 1e-10);

    double rmin_all = std::numeric_limits<double>::infinity();
    double rmin_core = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 2000; ++k) {
        const double r = k / 2000.0;
        const double v = profile.R(r);
        rmin_all = std::min(rmin_all, v);
        if (r <= 0.5) rmin_core = std::min(rmin_core, v);
    }
    add_row(rows, "kernels", "positivity", rmin_all, ">= 0", rmin_all >= 0.0);
    const double beyond = std::max({std::abs(profile.R(1.0)), std::abs(profile.R(1.25)),
                                    std::abs(profile.R(2.0))});
    add_row(rows, "kernels", "support", beyond, "== 0", beyond == 0.0);
    add_row(rows, "kernels", "nondegeneracy", rmin_core, "> 0", rmin_core > 0.0);

    // Discrete unit mass of the mollifier rows at Interior points.
    const double h = lattice_spacing(cfg, delta);
    const Domain dom = Domain::by_name(cfg.domain);
    const PointCloud cloud = build_cloud(dom, h, delta);
    const ScaledKernel bound(profile, dom.dim(), delta);
    NeighborRow scratch;
    double worst = 0.0;
    for (int i : cloud.interior())
        worst = std::max(worst, std::abs(mollifier_row_sum(cloud, bound, i, scratch) - 1.0));
    const double tol = 5.0 * (h / delta) * (h / delta);
    add_row(rows, "kernels", "interior-row-mass", worst, "<= 5(h/delta)^2 = " + fmt_g(tol),
            worst <= tol);
}

void suite_operators(const RunConfig& cfg, std::vector<CheckRow>& rows) {
    const KernelProfile profile = config_profile(cfg);
    const Domain dom = Domain::by_name(cfg.domain);
    const double delta = cfg.deltas.front();
    const double h = lattice_spacing(cfg, delta);
    const PointCloud cloud = build_cloud(dom, h, delta);
    const ScaledKernel kernel(profile, dom.dim(), delta);
    const OperatorSet ops = assemble_operators(cloud, kernel);
    const int n = cloud.size();
    const int dim = cloud.dim();

    Lcg rng(cfg.seed * 2 + 1);

    // <v, G p> + <D v, p> = 0 in the V-weighted pairing.
    std::vector<double> v(static_cast<std::size_t>(n) * dim), p(static_cast<std::size_t>(n));
    std::vector<double> gp(v.size()), dv(p.size());
    double adj = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        for (double& t : v) t = rng();
        for (double& t : p) t = rng();
        ops.grad.apply_grad(p.data(), gp.data());
        ops.div.apply_div(v.data(), dv.data());
        double a = 0.0, b = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < dim; ++d)
                a += cloud.volume(i) * v[static_cast<std::size_t>(i) * dim + d] *
                     gp[static_cast<std::size_t>(i) * dim + d];
            b += cloud.volume(i) * p[i] * dv[i];
        }
        adj = std::max(adj, std::abs(a + b) / std::max({std::abs(a), std::abs(b), 1e-30}));
    }
    add_row(rows, "operators", "grad-div-adjointness", adj, "<= 1e-12", adj <= 1e-12);

    // Constants map to bit zero through the difference-form applications.
    std::vector<double> ones(static_cast<std::size_t>(n), 0.8125), y(static_cast<std::size_t>(n));
    double cmax = 0.0;
    for (const SparseMatrix* m : {&ops.lap, &ops.stab}) {
        m->apply(ones.data(), y.data());
        for (double t : y) cmax = std::max(cmax, std::abs(t));
    }
    add_row(rows, "operators", "constants-annihilated", cmax, "== 0", cmax == 0.0);

    // Stored row coefficients sum to zero relative to the row mass.
    double srel = 0.0;
    for (const SparseMatrix* m : {&ops.lap, &ops.stab})
        for (int i = 0; i < n; ++i) {
            double s = 0.0, mass = 0.0;
            for (std::int64_t t = m->row_start[i]; t < m->row_start[i + 1]; ++t) {
                s += m->val[t];
                mass += std::abs(m->val[t]);
            }
            if (mass > 0.0) srel = std::max(srel, std::abs(s) / mass);
        }
    add_row(rows, "operators", "stored-row-sums", srel, "<= 1e-12", srel <= 1e-12);

    // V-weighted quadratic forms of Laplacian and stabilizer stay <= 0.
    double forms = -std::numeric_limits<double>::infinity();
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int trial = 0; trial < 200; ++trial) {
        for (double& t : w) t = rng();
        for (const SparseMatrix* m : {&ops.lap, &ops.stab}) {
            m->apply(w.data(), y.data());
            double form = 0.0;
            for (int i = 0; i < n; ++i) form += cloud.volume(i) * w[i] * y[i];
            forms = std::max(forms, form);
        }
    }
    add_row(rows, "operators", "forms-semidefinite", forms, "<= 1e-10", forms <= 1e-10);

    // Mollifier rows integrate one over Interior points.
    NeighborRow scratch;
    double worst = 0.0;
    for (int i : cloud.interior())
        worst = std::max(worst, std::abs(mollifier_row_sum(cloud, kernel, i, scratch) - 1.0));
    const double tol = 5.0 * (h / delta) * (h / delta);
    add_row(rows, "operators", "mollifier-interior-mass", worst,
            "<= 5(h/delta)^2 = " + fmt_g(tol), worst <= tol);
}

void suite_poincare(const RunConfig& cfg, std::vector<CheckRow>& rows) {
    const KernelProfile profile = config_profile(cfg);
    const Domain dom = Domain::by_name(cfg.domain);

    std::vector<double> cv, cp;
    for (double delta : cfg.deltas) {
        const double h = lattice_spacing(cfg, delta);
        const PointCloud cloud = build_cloud(dom, h, delta);
        const ScaledKernel kernel(profile, dom.dim(), delta);
        cv.push_back(poincare_constant_velocity(cloud, kernel));
        cp.push_back(poincare_constant_pressure(cloud, kernel));
        const std::string tag = "[delta=" + fmt_g(delta) + "]";
        add_row(rows, "poincare", "velocity-positive" + tag, cv.back(), "> 0", cv.back() > 0.0);
        add_row(rows, "poincare", "pressure-positive" + tag, cp.back(), "> 0", cp.back() > 0.0);
    }
    if (cfg.deltas.size() >= 2) {
        const double rv = *std::min_element(cv.begin(), cv.end()) / cv.front();
        const double rp = *std::min_element(cp.begin(), cp.end()) / cp.front();
        add_row(rows, "poincare", "velocity-uniformity", rv, ">= 0.5", rv >= 0.5);
        add_row(rows, "poincare", "pressure-uniformity", rp, ">= 0.5", rp >= 0.5);
    }
}

void suite_energy(const RunConfig& cfg, std::vector<CheckRow>& rows) {
    const KernelProfile profile = config_profile(cfg);
    const Domain dom = Domain::by_name(cfg.domain);
    const double delta = cfg.deltas.front();
    const double h = lattice_spacing(cfg, delta);
    const PointCloud cloud = build_cloud(dom, h, delta);
    const ScaledKernel kernel(profile, dom.dim(), delta);

    NonlocalStokesProblem problem;
    problem.cloud = &cloud;
    problem.kernel = &kernel;
    problem.f = make_forcing(cfg, cloud);
    problem.options = cfg.solver;
    const AssembledSystem asys = assemble_system(problem);
    const Solution sol = solve(asys, cfg.solver);

    const double rcap = sol.method == "direct" ? 1e-10 : cfg.solver.rtol;
    add_row(rows, "energy", "linear-residual", sol.residual, "<= " + fmt_g(rcap),
            sol.residual <= rcap);
    add_row(rows, "energy", "energy-gap", sol.energy_gap, "<= 1e-8", sol.energy_gap <= 1e-8);

    const double fnorm = vnorm2(cloud, problem.f, dom.dim());
    if (fnorm == 0.0) {
        double zmax = 0.0;
        for (double t : sol.u) zmax = std::max(zmax, std::abs(t));
        for (double t : sol.p) zmax = std::max(zmax, std::abs(t));
        add_row(rows, "energy", "zero-forcing-zero-solution", zmax, "== 0", zmax == 0.0);
        return;
    }

    // Doubling f doubles the solution exactly: scaling commutes with
    // rounding for powers of two.
    NonlocalStokesProblem doubled = problem;
    for (double& t : doubled.f) t *= 2.0;
    const AssembledSystem asys2 = assemble_system(doubled);
    const Solution sol2 = solve(asys2, cfg.solver);
    double dev = 0.0;
    for (std::size_t k = 0; k < sol.u.size(); ++k)
        dev = std::max(dev, std::abs(sol2.u[k] - 2.0 * sol.u[k]));
    for (std::size_t k = 0; k < sol.p.size(); ++k)
        dev = std::max(dev, std::abs(sol2.p[k] - 2.0 * sol.p[k]));
    add_row(rows, "energy", "scale-invariance", dev, "== 0", dev == 0.0);

    const double ratio = stability_ratio(sol, problem);
    add_row(rows, "energy", "stability-ratio-finite", ratio, "finite and > 0",
            std::isfinite(ratio) && ratio > 0.0);

    if (asys.unknowns <= kDirectUnknownLimit) {
        SolverOptions direct = cfg.solver;
        direct.method = SolverOptions::Method::Direct;
        SolverOptions krylov = cfg.solver;
        krylov.method = SolverOptions::Method::Krylov;
        krylov.rtol = std::min(cfg.solver.rtol, 1e-9);
        const Solution a = solve(asys, direct);
        const Solution b = solve(asys, krylov);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < a.u.size(); ++k) {
            num += (a.u[k] - b.u[k]) * (a.u[k] - b.u[k]);
            den += a.u[k] * a.u[k];
        }
        for (std::size_t k = 0; k < a.p.size(); ++k) {
            num += (a.p[k] - b.p[k]) * (a.p[k] - b.p[k]);
            den += a.p[k] * a.p[k];
        }
        const double rel = std::sqrt(num) / std::sqrt(std::max(den, 1e-300));
        add_row(rows, "energy", "direct-vs-krylov", rel, "<= 1e-6", rel <= 1e-6);
    }
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string checks_csv(const std::vector<CheckRow>& rows) {
    std::ostringstream os;
    os << "suite,check,measured,threshold,result\n";
    for (const CheckRow& r : rows)
        os << r.suite << "," << csv_quote(r.name) << "," << csv_quote(r.measured) << ","
           << csv_quote(r.threshold) << "," << (r.pass ? "pass" : "fail") << "\n";
    return os.str();
}

void print_checks(std::ostream& os, const std::vector<CheckRow>& rows) {
    os << std::left << std::setw(10) << "suite" << std::setw(38) << "check" << std::setw(16)
       << "measured" << std::setw(28) << "threshold"
       << "result\n";
    int failed = 0;
    for (const CheckRow& r : rows) {
        os << std::left << std::setw(10) << r.suite << std::setw(38) << r.name << std::setw(16)
           << r.measured << std::setw(28) << r.threshold << (r.pass ? "PASS" : "FAIL") << "\n";
        failed += r.pass ? 0 : 1;
    }
    os << rows.size() << " checks, " << failed << " failed\n";
}

// -------------------------------------------------------------------------
// info
// -------------------------------------------------------------------------

const char* kInfoText = R"(nlstokes: meshfree nonlocal Stokes solver with volume constraints

domains
  unit-disk      radius-1 disk centered at the origin
  unit-square    the unit square [0,1] x [0,1]

kernel profiles
  quadratic      R(r) = (1-r)^2 on [0,1]
  cosine         R(r) = (1+cos(pi r))/2 on [0,1]
  custom         CSV table of (r, R) rows: "kernel": {"table": "R.csv"}

cases
  disk-swirl     manufactured swirl on the unit disk: u = 4(1-|x|^2)(y,-x), p = x1
  zero           zero forcing; the solution is identically zero
  forcing table  CSV of (x1..xn, f1..fn) rows: "case": {"forcing": "f.csv"};
                 sampled onto the cloud by nearest neighbor

solver methods
  auto           direct at or below 20000 unknowns, krylov beyond
  direct         sparse LU with iterative refinement, residual <= 1e-10 relative
  krylov         diagonally preconditioned MINRES, relative tolerance rtol

defaults
  coupling       h = delta^1.5/2
  solver         method auto, rtol 1e-10, max_iter 0 (size-based)
  output         out
  seed           1

check suites
  kernels, operators, poincare, energy (or all)

exit codes
  0 success, 2 config error, 3 solver failure, 4 partial study, 5 failed checks

environment
  NLSTOKES_THREADS caps the worker thread count
)";

}  // namespace

// -------------------------------------------------------------------------
// entry points
// -------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const std::string& out_dir, bool force) {
    if (cfg.deltas.size() != 1)
        throw ConfigError("config key \"delta\": solve needs a single value, got a ladder of " +
                          std::to_string(cfg.deltas.size()));
    OutputDir out(out_dir, force);
    return run_solve(cfg, out);
}

int cmd_study(const RunConfig& cfg, const std::string& out_dir, bool force) {
    if (!cfg.forcing_table.empty() || cfg.case_name == "zero")
        throw ConfigError(
            "config key \"case\": studies need a manufactured case with exact fields");
    if (cfg.domain != "unit-disk")
        throw ConfigError("config key \"domain\": convergence studies run on \"unit-disk\"");

    OutputDir out(out_dir, force);
    const ManufacturedCase mc = builtin_case(cfg.case_name);
    const KernelProfile profile = config_profile(cfg);
    const StudyReport rep = convergence_study(mc, profile, cfg.deltas, cfg.coupling, cfg.solver);

    std::ostringstream csv, json;
    rep.write_csv(csv);
    rep.write_json(json);
    out.write_text("study.csv", csv.str());
    out.write_text("study.json", json.str());
    out.write_text("study.svg", study_svg(rep));
    out.write_text("config.json", config_echo_json(cfg));
    out.write_manifest("study");
    return rep.partial ? 4 : 0;
}

int cmd_check(const RunConfig& cfg, const std::string& suite, const std::string& out_dir,
              bool force, std::ostream& os) {
    const bool all = suite == "all";
    if (!all && suite != "kernels" && suite != "operators" && suite != "poincare" &&
        suite != "energy")
        throw ConfigError("unknown check suite \"" + suite +
                          "\" (kernels, operators, poincare, energy, all)");

    OutputDir out(out_dir, force);
    std::vector<CheckRow> rows;
    try {
        if (all || suite == "kernels") suite_kernels(cfg, rows);
        if (all || suite == "operators") suite_operators(cfg, rows);
        if (all || suite == "poincare") suite_poincare(cfg, rows);
        if (all || suite == "energy") suite_energy(cfg, rows);
    } catch (const ValidationError& e) {
        // A violated model assumption is a finding, not a crash: report it
        // as a failed row ("kernel profile violates positivity: ...").
        rows.push_back(CheckRow{suite, "assumption", e.what(), "holds", false});
    }

    print_checks(os, rows);
    out.write_text("checks.csv", checks_csv(rows));
    out.write_text("config.json", config_echo_json(cfg));
    out.write_manifest("check");

    for (const CheckRow& r : rows)
        if (!r.pass) return 5;
    return 0;
}

int cmd_info(std::ostream& os) {
    os << "nlstokes " << kVersion << "\n" << kInfoText;
    return 0;
}

}  // namespace nls
