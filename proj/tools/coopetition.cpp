#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "coopetition/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Trust dynamics in coopetitive relationships: simulation, sweeps, equilibria, validation"};
    app.require_subcommand(1);

    coop::cli::RunConfig cfg;
    std::string out;

    auto common = [&](CLI::App* sub, bool needs_scenario) {
        if (needs_scenario)
            sub->add_option("--scenario", cfg.scenario, "scenario file or builtin:renault_nissan")->required();
        sub->add_option("--out", out, "output directory")->required();
        sub->add_option("--set", cfg.overrides, "override section.key=value (repeatable)");
    };
    common(app.add_subcommand("simulate", "run a scenario and write its trajectory"), true);
    common(app.add_subcommand("validate", "simulate a scenario and score it on the 60-point rubric"), true);
    common(app.add_subcommand("metrics", "evaluate the behavioral metrics for a scenario's trust parameters"), true);
    common(app.add_subcommand("equilibrium", "solve the two-actor Markov game by value iteration"), true);
    auto* sweep = app.add_subcommand("sweep", "full factorial parameter sweep");
    common(sweep, false);
    sweep->add_option("--grid", cfg.grid, "default or a grid file")->capture_default_str();
    sweep->add_option("--threads", cfg.threads, "worker threads (0: all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : coop::exit_code(coop::ErrorKind::usage);
    }

    cfg.command = *coop::cli::parse_command(app.get_subcommands().front()->get_name());
    cfg.out = out;
    return coop::cli::run(cfg);
}
