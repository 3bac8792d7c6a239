/**
 * @file main.cpp
 * @brief nlstokes executable: argument parsing and exit-code mapping.
 *
 * nlstokes solve|study|check|info --config <path> [--out <dir>] [--force]
 *
 * Exit codes: 0 success, 2 config error, 3 solver failure, 4 partial study,
 * 5 failed checks. Nothing else escapes.
 */

#include <iostream>

#include "CLI11.hpp"
#include "nlstokes/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"meshfree nonlocal Stokes solver with volume constraints"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite = "all";
    bool force = false;

    CLI::App* solve = app.add_subcommand("solve", "solve one instance and write its bundle");
    CLI::App* study = app.add_subcommand("study", "run a convergence ladder");
    CLI::App* check = app.add_subcommand("check", "run invariant suites");
    CLI::App* info = app.add_subcommand("info", "list domains, kernels, cases and defaults");

    for (CLI::App* sub : {solve, study, check}) {
        sub->add_option("--config", config_path, "run configuration JSON")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_flag("--force", force, "overwrite an existing report bundle");
    }
    check->add_option("--suite", suite, "kernels|operators|poincare|energy|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help lands here with exit code 0; genuine argument errors map
        // to the config-error code.
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (info->parsed()) return nls::cmd_info(std::cout);

        const nls::RunConfig cfg = nls::load_config(config_path);
        const std::string dir = out_dir.empty() ? cfg.output : out_dir;
        if (solve->parsed()) return nls::cmd_solve(cfg, dir, force);
        if (study->parsed()) return nls::cmd_study(cfg, dir, force);
        return nls::cmd_check(cfg, suite, dir, force, std::cout);
    } catch (const nls::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nls::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nls::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
