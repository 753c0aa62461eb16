// sfas: command-line front end for the experiment catalog.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sfas/config.hpp"
#include "sfas/diagnostics.hpp"
#include "sfas/harness.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunOptions {
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out_dir = "results";
    std::optional<int> threads;
    bool plot = false;
};

int run(const std::string& name, const RunOptions& opt) {
    sfas::ExperimentConfig config;
    try {
        config = sfas::default_config(name);
        if (!opt.config_file.empty()) {
            sfas::apply_config_file(config, opt.config_file);
        }
        if (opt.seed) config.seed = *opt.seed;
        if (opt.trials) config.trials = *opt.trials;
        if (opt.threads) config.threads = *opt.threads;
        config.out_dir = opt.out_dir;
        config.plot = opt.plot;
        sfas::validate_config(config);
    } catch (const sfas::ConfigError& e) {
        std::cerr << "sfas: config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const sfas::ExperimentResult result = sfas::run_experiment(config);
    std::cout << name << ": wrote";
    for (const sfas::Table& t : result.tables) {
        std::cout << ' ' << t.name() << ".csv";
    }
    std::cout << " to " << opt.out_dir << " in " << result.wall_seconds << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-FAS simulator: scalable fluid antenna identifiability and J-MUSIC experiments"};
    app.require_subcommand(1);

    RunOptions opt;
    std::string chosen;
    for (const sfas::ExperimentInfo& info : sfas::experiment_catalog()) {
        CLI::App* sub = app.add_subcommand(info.name, info.figure + ": " + info.summary);
        sub->add_option("--config", opt.config_file, "key = value config file")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", opt.seed, "base seed");
        sub->add_option("--trials", opt.trials, "Monte Carlo trials per sweep point");
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--threads", opt.threads, "worker threads (default: $SFAS_THREADS or cores)");
        sub->add_flag("--plot", opt.plot, "also write gnuplot scripts");
        sub->callback([&chosen, name = info.name] { chosen = name; });
    }

    int bounds_m = 32;
    int bounds_p = 3;
    bool bounds_csv = false;
    CLI::App* bounds = app.add_subcommand("bounds", "print the identifiability bound table");
    bounds->add_option("--m", bounds_m, "total elements M")->capture_default_str();
    bounds->add_option("--p", bounds_p, "edge removal p")->capture_default_str();
    bounds->add_flag("--csv", bounds_csv, "CSV instead of aligned text");

    CLI::App* list = app.add_subcommand("list", "list the experiment catalog");

    std::string plot_name;
    std::string plot_dir = "results";
    CLI::App* plot = app.add_subcommand("plot", "write gnuplot scripts for existing CSVs");
    plot->add_option("experiment", plot_name, "experiment name")->required();
    plot->add_option("--out", plot_dir, "directory holding the CSVs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (list->parsed()) {
            for (const sfas::ExperimentInfo& info : sfas::experiment_catalog()) {
                std::cout << info.name << "\t" << info.figure << "\t" << info.summary << '\n';
            }
            return 0;
        }
        if (bounds->parsed()) {
            const sfas::BoundsReport report = sfas::identifiability_bounds(bounds_m, bounds_p);
            if (bounds_csv) {
                sfas::write_bounds_csv(std::cout, std::span(&report, 1));
            } else {
                sfas::write_bounds_text(std::cout, report);
            }
            return 0;
        }
        if (plot->parsed()) {
            for (const std::string& path : sfas::write_plot_scripts(plot_name, plot_dir)) {
                std::cout << path << '\n';
            }
            return 0;
        }
        return run(chosen, opt);
    } catch (const sfas::ConfigError& e) {
        std::cerr << "sfas: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const sfas::InputError& e) {
        if (bounds->parsed()) {
            std::cerr << "sfas: " << e.what() << '\n';
            return kExitConfig;
        }
        std::cerr << "sfas: error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "sfas: error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
