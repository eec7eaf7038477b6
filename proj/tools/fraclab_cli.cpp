// Command-line experiment runner.
//
//   fraclab run <config>   run the sweeps configured in a key=value file
//   fraclab check <name>   run one acceptance check
//   fraclab list [module]  list acceptance checks, optionally by module
//
// Exit codes: 0 success, 1 validation error, 2 acceptance failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fraclab/fraclab.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fractional Laplace-Beltrami laboratory"};
    app.require_subcommand(1);

    int threads = 0;
    std::string out_dir;
    long long seed = -1;
    app.add_option("--threads", threads, "worker thread count");
    app.add_option("--out", out_dir, "output directory override");
    app.add_option("--seed", seed, "ensemble seed override");

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->fallthrough();  // accept the global flags after the subcommand too
    run->add_option("config", config_path, "config file path")->required();

    std::string check_name;
    auto* check = app.add_subcommand("check", "run one acceptance check");
    check->fallthrough();
    check->add_option("name", check_name, "check name")->required();

    std::string module_filter;
    auto* list = app.add_subcommand("list", "list acceptance checks");
    list->fallthrough();
    list->add_option("module", module_filter, "restrict to one module");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (threads > 0) fraclab::thread_count() = threads;

    if (list->parsed()) {
        for (const auto& def : fraclab::check_registry())
            if (module_filter.empty() || module_filter == def.module)
                std::cout << def.name << "  [" << def.module << "]\n";
        return 0;
    }

    if (check->parsed()) {
        const auto* def = fraclab::find_check(check_name);
        if (!def) {
            std::cerr << "error: unknown check '" << check_name << "'\n";
            return 1;
        }
        fraclab::CheckResult r;
        try {
            r = def->fn();
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.details << "\n";
        return r.pass ? 0 : 2;
    }

    // run
    fraclab::ExperimentConfig cfg;
    try {
        cfg = fraclab::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!out_dir.empty()) cfg.output = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    return fraclab::run_experiment(cfg, std::cout, std::cerr);
}
