/**
 * @file config.cpp
 * @brief JSON config parsing with eager, key-naming validation.
 */

#include "nlstokes/cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nls {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw ConfigError("config key \"" + key + "\": " + what);
}

double number_at(const json& v, const std::string& key) {
    if (!v.is_number()) bad_key(key, "expected a number");
    return v.get<double>();
}

double positive_at(const json& v, const std::string& key) {
    const double x = number_at(v, key);
    if (!(x > 0.0) || !std::isfinite(x)) bad_key(key, "must be a positive finite number");
    return x;
}

std::string string_at(const json& v, const std::string& key) {
    if (!v.is_string()) bad_key(key, "expected a string");
    return v.get<std::string>();
}

void reject_unknown(const json& obj, const std::string& key,
                    std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) bad_key(key + "." + item.key(), "unknown key");
    }
}

/** Accepts "delta^a/c" with numeric a, c; rejects trailing garbage. */
CouplingRule parse_rule(const std::string& text) {
    double a = 0.0, c = 0.0;
    int used = -1;
    if (std::sscanf(text.c_str(), "delta^%lf/%lf%n", &a, &c, &used) != 2 ||
        used != static_cast<int>(text.size()))
        bad_key("coupling.rule", "expected the form \"delta^a/c\", got \"" + text + "\"");
    if (!(a > 0.0) || !(c > 0.0)) bad_key("coupling.rule", "exponent and divisor must be positive");
    return CouplingRule::power(a, c);
}

void parse_domain(RunConfig& cfg, const json& v) {
    if (v.is_string()) {
        cfg.domain = v.get<std::string>();
    } else if (v.is_object()) {
        reject_unknown(v, "domain", {"name"});
        if (!v.contains("name")) bad_key("domain", "object form needs a \"name\"");
        cfg.domain = string_at(v["name"], "domain.name");
    } else {
        bad_key("domain", "expected a name or {\"name\": ...}");
    }
    try {
        Domain::by_name(cfg.domain);
    } catch (const ConfigError& e) {
        bad_key("domain", e.what());
    }
}

void check_builtin_profile(const std::string& name, const std::string& key) {
    try {
        KernelProfile::builtin(name);
    } catch (const ConfigError& e) {
        bad_key(key, e.what());
    }
}

void parse_kernel(RunConfig& cfg, const json& v) {
    if (v.is_string()) {
        cfg.kernel_profile = v.get<std::string>();
        cfg.kernel_table.clear();
        check_builtin_profile(cfg.kernel_profile, "kernel");
        return;
    }
    if (!v.is_object()) bad_key("kernel", "expected a profile name or object");
    reject_unknown(v, "kernel", {"profile", "table"});
    if (v.contains("profile") && v.contains("table"))
        bad_key("kernel", "\"profile\" and \"table\" are exclusive");
    if (v.contains("table")) {
        cfg.kernel_table = string_at(v["table"], "kernel.table");
        cfg.kernel_profile.clear();
        if (cfg.kernel_table.empty()) bad_key("kernel.table", "path must be nonempty");
    } else if (v.contains("profile")) {
        cfg.kernel_profile = string_at(v["profile"], "kernel.profile");
        cfg.kernel_table.clear();
        check_builtin_profile(cfg.kernel_profile, "kernel.profile");
    } else {
        bad_key("kernel", "object form needs \"profile\" or \"table\"");
    }
}

void parse_delta(RunConfig& cfg, const json& v) {
    cfg.deltas.clear();
    if (v.is_number()) {
        cfg.deltas.push_back(positive_at(v, "delta"));
        return;
    }
    if (!v.is_array() || v.empty()) bad_key("delta", "expected a number or nonempty array");
    for (const auto& e : v) cfg.deltas.push_back(positive_at(e, "delta"));
    for (std::size_t k = 1; k < cfg.deltas.size(); ++k)
        if (!(cfg.deltas[k] < cfg.deltas[k - 1]))
            bad_key("delta", "ladder values must be strictly descending");
}

void parse_coupling(RunConfig& cfg, const json& v) {
    if (!v.is_object()) bad_key("coupling", "expected {\"h\": ...} or {\"rule\": ...}");
    reject_unknown(v, "coupling", {"h", "rule"});
    if (v.contains("h") == v.contains("rule"))
        bad_key("coupling", "exactly one of \"h\" and \"rule\"");
    if (v.contains("h"))
        cfg.coupling = CouplingRule::fixed(positive_at(v["h"], "coupling.h"));
    else
        cfg.coupling = parse_rule(string_at(v["rule"], "coupling.rule"));
}

void parse_case(RunConfig& cfg, const json& v) {
    if (v.is_string()) {
        cfg.case_name = v.get<std::string>();
        cfg.forcing_table.clear();
        if (cfg.case_name != "zero") {
            try {
                builtin_case(cfg.case_name);
            } catch (const ConfigError& e) {
                bad_key("case", e.what());
            }
        }
        return;
    }
    if (!v.is_object()) bad_key("case", "expected a case name or {\"forcing\": path}");
    reject_unknown(v, "case", {"forcing"});
    if (!v.contains("forcing")) bad_key("case", "object form needs a \"forcing\" path");
    cfg.forcing_table = string_at(v["forcing"], "case.forcing");
    cfg.case_name.clear();
    if (cfg.forcing_table.empty()) bad_key("case.forcing", "path must be nonempty");
}

void parse_solver(RunConfig& cfg, const json& v) {
    if (!v.is_object()) bad_key("solver", "expected an object");
    reject_unknown(v, "solver", {"method", "rtol", "max_iter"});
    if (v.contains("method")) {
        const std::string m = string_at(v["method"], "solver.method");
        if (m == "auto")
            cfg.solver.method = SolverOptions::Method::Auto;
        else if (m == "direct")
            cfg.solver.method = SolverOptions::Method::Direct;
        else if (m == "krylov")
            cfg.solver.method = SolverOptions::Method::Krylov;
        else
            bad_key("solver.method", "expected \"auto\", \"direct\" or \"krylov\"");
    }
    if (v.contains("rtol")) cfg.solver.rtol = positive_at(v["rtol"], "solver.rtol");
    if (v.contains("max_iter")) {
        if (!v["max_iter"].is_number_integer() || v["max_iter"].get<std::int64_t>() < 0)
            bad_key("solver.max_iter", "expected a nonnegative integer");
        cfg.solver.max_iter = static_cast<int>(v["max_iter"].get<std::int64_t>());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config parse: top level must be an object");

    RunConfig cfg;
    bool saw_delta = false;
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        const json& v = item.value();
        if (key == "domain") {
            parse_domain(cfg, v);
        } else if (key == "kernel") {
            parse_kernel(cfg, v);
        } else if (key == "delta") {
            parse_delta(cfg, v);
            saw_delta = true;
        } else if (key == "coupling") {
            parse_coupling(cfg, v);
        } else if (key == "case") {
            parse_case(cfg, v);
        } else if (key == "solver") {
            parse_solver(cfg, v);
        } else if (key == "output") {
            cfg.output = string_at(v, "output");
            if (cfg.output.empty()) bad_key("output", "path must be nonempty");
        } else if (key == "seed") {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                bad_key("seed", "expected a nonnegative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else {
            bad_key(key, "unknown key");
        }
    }
    if (!saw_delta) bad_key("delta", "required");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

KernelProfile config_profile(const RunConfig& cfg) {
    if (!cfg.kernel_table.empty()) return KernelProfile::from_table(cfg.kernel_table);
    return KernelProfile::builtin(cfg.kernel_profile);
}

std::string config_echo_json(const RunConfig& cfg) {
    ordered_json j;
    j["domain"] = cfg.domain;
    if (!cfg.kernel_table.empty())
        j["kernel"] = {{"table", cfg.kernel_table}};
    else
        j["kernel"] = {{"profile", cfg.kernel_profile}};
    j["delta"] = cfg.deltas;
    // The echo re-parses to the same run: fixed rules round-trip through
    // their h value, power rules through the "delta^a/c" text.
    double fixed_h = 0.0;
    int used = -1;
    if (std::sscanf(cfg.coupling.description.c_str(), "h=%lf%n", &fixed_h, &used) == 1 &&
        used == static_cast<int>(cfg.coupling.description.size()))
        j["coupling"] = {{"h", fixed_h}};
    else
        j["coupling"] = {{"rule", cfg.coupling.description}};
    if (!cfg.forcing_table.empty())
        j["case"] = {{"forcing", cfg.forcing_table}};
    else
        j["case"] = cfg.case_name;
    const char* method = cfg.solver.method == SolverOptions::Method::Direct   ? "direct"
                         : cfg.solver.method == SolverOptions::Method::Krylov ? "krylov"
                                                                              : "auto";
    j["solver"] = {{"method", method}, {"rtol", cfg.solver.rtol}, {"max_iter", cfg.solver.max_iter}};
    j["output"] = cfg.output;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

}  // namespace nls
