#include <CLI11.hpp>
#include <iostream>

#include "lim/cli/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Locally informed MCMC experiment runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment config and write CSVs plus a manifest");
    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    bool paper_scale = false;
    std::string out_dir;
    run->add_option("config", config_path, "config file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--threads", threads, "worker threads (default: all cores)");
    run->add_flag("--paper-scale", paper_scale, "use the paper's replicate counts");
    auto* out_opt = run->add_option("--out", out_dir, "output directory (overrides the config)");

    auto* list = app.add_subcommand("list", "print the experiment catalog with defaults");
    auto* tmpl = app.add_subcommand("template", "print a config file with every key at its default");
    std::string tmpl_id;
    tmpl->add_option("experiment", tmpl_id, "experiment id")->required();

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    std::string validate_path;
    validate->add_option("config", validate_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            lim::print_catalog(std::cout);
            return 0;
        }
        if (*tmpl) {
            const auto* e = lim::find_experiment(tmpl_id);
            if (!e) {
                std::cerr << "unknown experiment " << tmpl_id << "\n";
                return 2;
            }
            std::cout << lim::config_template(*e);
            return 0;
        }
        if (*validate) {
            auto cfg = lim::Config::parse_file(validate_path);
            auto diags = lim::validate_config(cfg);
            if (diags.empty()) {
                std::cout << "ok\n";
                return 0;
            }
            for (const auto& d : diags) std::cout << validate_path << ": " << lim::to_string(d) << "\n";
            return 1;
        }
        auto cfg = lim::Config::parse_file(config_path);
        lim::RunOptions opt;
        if (*seed_opt) opt.seed = seed;
        opt.threads = threads;
        opt.paper_scale = paper_scale;
        if (*out_opt) opt.out_dir = out_dir;
        auto rep = lim::run_experiment(cfg, opt);
        std::cout << rep.id << " finished in " << rep.wall_seconds << " s (seed " << rep.seed << ")\n";
        for (const auto& f : rep.files) std::cout << "  " << f << "\n";
        return 0;
    } catch (const lim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
