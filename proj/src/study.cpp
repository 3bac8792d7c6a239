/**
 * @file study.cpp
 * @brief Convergence ladders, order fits and report serialization.
 */

#include "nlstokes/analysis/study.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace nls {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* solver_label(const SolverOptions& opt) {
    switch (opt.method) {
        case SolverOptions::Method::Direct: return "direct";
        case SolverOptions::Method::Krylov: return "krylov";
        default: return "auto";
    }
}

/// Least-squares slope of log(error) against log(delta) over successful
/// rows; NaN until three usable points exist (a pair is not a fit).
double fit_order(const std::vector<StudyRow>& rows, double SolveErrors::*field) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        const double e = r.errors.*field;
        if (e > 0.0 && std::isfinite(e)) {
            xs.push_back(std::log(r.delta));
            ys.push_back(std::log(e));
        }
    }
    if (xs.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    return sxy / sxx;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

CouplingRule CouplingRule::fixed(double h) {
    CouplingRule r;
    r.description = "h=" + format_g17(h);
    r.h_of_delta = [h](double) { return h; };
    return r;
}

CouplingRule CouplingRule::power(double a, double c) {
    CouplingRule r;
    r.description = "delta^" + format_g17(a) + "/" + format_g17(c);
    r.h_of_delta = [a, c](double delta) { return std::pow(delta, a) / c; };
    return r;
}

StudyReport convergence_study(const ManufacturedCase& mc, const KernelProfile& profile,
                              const std::vector<double>& deltas, const CouplingRule& coupling,
                              const SolverOptions& options) {
    if (deltas.size() < 3)
        throw ConfigError("convergence study needs at least 3 delta values, got " +
                          std::to_string(deltas.size()));
    for (std::size_t k = 0; k + 1 < deltas.size(); ++k)
        if (!(deltas[k + 1] < deltas[k]))
            throw ConfigError("delta ladder must be strictly descending");

    StudyReport rep;
    rep.case_name = mc.name;
    rep.domain_name = "unit-disk";
    rep.kernel_name = profile.name();
    rep.coupling = coupling.description;
    rep.solver = solver_label(options);
    rep.version = kVersion;

    const Domain dom = Domain::unit_disk();
    for (double delta : deltas) {
        StudyRow row;
        row.delta = delta;
        row.h = coupling.h_of_delta(delta);
        try {
            if (!(row.h > 0.0) || !std::isfinite(row.h))
                throw ConfigError("coupling rule produced non-positive spacing " +
                                  format_g17(row.h));
            const auto t0 = std::chrono::steady_clock::now();
            const PointCloud cloud = build_cloud(dom, row.h, delta);
            const ScaledKernel kernel(profile, mc.dim, delta);
            NonlocalStokesProblem pb;
            pb.cloud = &cloud;
            pb.kernel = &kernel;
            pb.f = sample_forcing(mc, cloud);
            pb.options = options;
            const AssembledSystem sys = assemble_system(pb);
            row.assemble_seconds = seconds_since(t0);

            const auto t1 = std::chrono::steady_clock::now();
            const Solution sol = solve(sys, options);
            row.solve_seconds = seconds_since(t1);

            row.n_points = cloud.size();
            row.n_interior = static_cast<int>(cloud.interior().size());
            row.unknowns = sys.unknowns;
            row.method = sol.method;
            row.iterations = sol.iterations;
            row.errors = compare_solution(mc, cloud, kernel, sol);
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.failure = e.what();
            rep.partial = true;
        }
        rep.rows.push_back(std::move(row));
    }

    rep.order_u_l2 = fit_order(rep.rows, &SolveErrors::error_u_l2);
    rep.order_u_energy = fit_order(rep.rows, &SolveErrors::error_u_energy);
    rep.order_p_l2 = fit_order(rep.rows, &SolveErrors::error_p_l2);
    return rep;
}

void StudyReport::write_csv(std::ostream& os) const {
    os << "delta,h,n_points,n_interior,unknowns,error_u_l2,error_u_energy,error_p_l2,"
          "method,iterations,status,failure\n";
    for (const auto& r : rows) {
        os << format_g17(r.delta) << ',' << format_g17(r.h) << ',' << r.n_points << ','
           << r.n_interior << ',' << r.unknowns << ',' << format_g17(r.errors.error_u_l2) << ','
           << format_g17(r.errors.error_u_energy) << ',' << format_g17(r.errors.error_p_l2)
           << ',' << r.method << ',' << r.iterations << ',' << (r.ok ? "ok" : "failed") << ','
           << csv_escape(r.failure) << '\n';
    }
    os << "# observed_order_u_l2," << format_g17(order_u_l2) << '\n';
    os << "# observed_order_u_energy," << format_g17(order_u_energy) << '\n';
    os << "# observed_order_p_l2," << format_g17(order_p_l2) << '\n';
}

void StudyReport::write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    j["metadata"] = {{"case", case_name},     {"domain", domain_name},
                     {"kernel", kernel_name}, {"coupling", coupling},
                     {"solver", solver},      {"version", version},
                     {"partial", partial}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["delta"] = r.delta;
        row["h"] = r.h;
        row["n_points"] = r.n_points;
        row["n_interior"] = r.n_interior;
        row["unknowns"] = r.unknowns;
        row["error_u_l2"] = r.errors.error_u_l2;
        row["error_u_energy"] = r.errors.error_u_energy;
        row["error_p_l2"] = r.errors.error_p_l2;
        row["assemble_seconds"] = r.assemble_seconds;
        row["solve_seconds"] = r.solve_seconds;
        row["method"] = r.method;
        row["iterations"] = r.iterations;
        row["ok"] = r.ok;
        row["failure"] = r.failure;
        j["rows"].push_back(std::move(row));
    }
    // NaN (undefined order) serializes as null by JSON rules
    j["observed_orders"] = {{"error_u_l2", order_u_l2},
                            {"error_u_energy", order_u_energy},
                            {"error_p_l2", order_p_l2}};
    os << j.dump(2) << '\n';
}

}  // namespace nls
