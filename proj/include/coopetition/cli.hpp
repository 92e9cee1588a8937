#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "coopetition/equilibrium.hpp"
#include "coopetition/io/artifacts.hpp"
#include "coopetition/io/run_config.hpp"
#include "coopetition/io/scenario_file.hpp"
#include "coopetition/metrics.hpp"
#include "coopetition/sweep.hpp"
#include "coopetition/validation.hpp"

namespace coop::cli {

enum class Command { simulate, sweep, metrics, equilibrium, validate };

inline std::optional<Command> parse_command(std::string_view s) {
    if (s == "simulate") return Command::simulate;
    if (s == "sweep") return Command::sweep;
    if (s == "metrics") return Command::metrics;
    if (s == "equilibrium") return Command::equilibrium;
    if (s == "validate") return Command::validate;
    return std::nullopt;
}

struct RunConfig {
    Command command = Command::simulate;
    std::string scenario;           // path or builtin:<name>
    std::string grid = "default";   // sweep only: "default" or a path
    std::filesystem::path out;
    std::vector<std::string> overrides;  // section.key=value
    unsigned threads = 0;                // 0: hardware concurrency
};

namespace detail {

inline std::vector<io::Override> parse_overrides(const std::vector<std::string>& raw) {
    std::vector<io::Override> out;
    for (const auto& r : raw) out.push_back(io::parse_override(r));
    return out;
}

struct LoadedScenario {
    Scenario scenario;
    io::Document doc;
};

inline LoadedScenario load(const RunConfig& cfg, const std::set<std::string, std::less<>>& extra) {
    if (cfg.scenario.empty()) throw UsageError("--scenario is required for this command");
    std::filesystem::path base;
    io::Document doc = io::scenario_document(cfg.scenario, base);
    io::apply_overrides(doc, parse_overrides(cfg.overrides));
    Scenario s = io::parse_scenario(doc, base, extra);
    return {std::move(s), std::move(doc)};
}

inline MetricProbeSpec probe_from(const io::Document& doc) {
    MetricProbeSpec p;
    if (const io::Section* s = io::detail::unique_section(doc, "probe", false)) io::parse_probe_section(*s, doc.source, p);
    return p;
}

inline unsigned thread_count(unsigned hint) {
    if (hint > 0) return hint;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

inline io::OutputSet simulate(const RunConfig& cfg, std::ostream& log) {
    const auto [sc, doc] = load(cfg, {});
    const Trajectory traj = coop::simulate(sc);
    io::OutputSet out;
    out.add("trajectory.csv", io::trajectory_csv(traj));
    out.add("utilities.csv", io::utilities_csv(traj));
    out.add("resolved_config", io::emit_scenario(sc));
    log << "simulated " << traj.size() << " periods of '" << sc.name << "'; final mean trust "
        << io::format_csv(traj.mean_trust(traj.size() - 1)) << "\n";
    return out;
}

inline io::OutputSet validate(const RunConfig& cfg, std::ostream& log) {
    const auto [sc, doc] = load(cfg, {});
    const Trajectory traj = coop::simulate(sc);
    const ValidationReport report = coop::validate(traj, annotations_from_scenario(sc));
    io::OutputSet out;
    out.add("trajectory.csv", io::trajectory_csv(traj));
    out.add("validation.json", io::validation_json(report));
    out.add("resolved_config", io::emit_scenario(sc));
    log << io::validation_text(report);
    return out;
}

inline io::OutputSet metrics(const RunConfig& cfg, std::ostream& log) {
    const auto [sc, doc] = load(cfg, {"probe"});
    const MetricProbeSpec probe = probe_from(doc);
    const ConfigOutcome o = evaluate_config(sc.trust_params, probe);
    io::OutputSet out;
    out.add("metrics.csv", io::metrics_csv(o));
    out.add("resolved_config", io::emit_scenario(sc) + "\n" + io::emit_probe(probe));
    const auto v = o.values();
    for (std::size_t m = 0; m < ConfigOutcome::count; ++m) log << ConfigOutcome::names[m] << " " << io::format_csv(v[m]) << "\n";
    return out;
}

inline io::OutputSet sweep(const RunConfig& cfg, std::ostream& log) {
    const io::SweepConfig sc = io::load_sweep_config(cfg.grid, parse_overrides(cfg.overrides));
    const auto outcomes = evaluate_grid(sc.grid, sc.probe, thread_count(cfg.threads));
    const auto frontier = pareto_frontier(outcomes);
    io::OutputSet out;
    out.add("sweep_outcomes.csv", io::sweep_outcomes_csv(sc.grid, outcomes));
    out.add("sweep_summary.json", io::sweep_summary_json(outcomes, frontier.size()));
    out.add("sensitivity.csv", io::sensitivity_csv(sensitivity(outcomes, sc.grid)));
    out.add("pareto.csv", io::pareto_csv(sc.grid, frontier));
    out.add("resolved_config", io::emit_sweep_config(sc));
    log << "evaluated " << outcomes.size() << " configurations; pareto frontier " << frontier.size() << "\n";
    return out;
}

inline io::OutputSet equilibrium(const RunConfig& cfg, std::ostream& log) {
    const auto [sc, doc] = load(cfg, {"equilibrium"});
    const io::EquilibriumSettings settings = io::parse_equilibrium_section(doc);
    const EquilibriumProblem problem = io::equilibrium_problem(sc, settings);
    const SolverOptions options = io::solver_options(settings);
    const EquilibriumSolution sol = value_iteration(problem, options);
    const Trajectory path = simulate_equilibrium_path(sol.policy, problem, sc.initial, settings.path_periods);
    io::OutputSet out;
    out.add("policy.csv", io::policy_csv(sol));
    out.add("convergence.csv", io::convergence_csv(sol));
    out.add("equilibrium_path.csv", io::equilibrium_path_csv(path));
    out.add("equilibrium.json", io::equilibrium_json(sol, options.horizon));
    out.add("resolved_config", io::emit_scenario(sc) + "\n" + io::emit_equilibrium_settings(settings));
    log << "value iteration: " << sol.sweeps << " sweeps, residual " << io::format_csv(sol.residual) << ", monotone fraction "
        << io::format_csv(policy_monotonicity(sol.policy).fraction_monotone()) << "\n";
    return out;
}

} // namespace detail

// Builds every artifact in memory, then commits them; nothing is written on failure.
inline io::OutputSet execute(const RunConfig& cfg, std::ostream& log) {
    if (cfg.out.empty()) throw UsageError("--out is required");
    switch (cfg.command) {
    case Command::simulate: return detail::simulate(cfg, log);
    case Command::sweep: return detail::sweep(cfg, log);
    case Command::metrics: return detail::metrics(cfg, log);
    case Command::equilibrium: return detail::equilibrium(cfg, log);
    case Command::validate: return detail::validate(cfg, log);
    }
    throw UsageError("unknown command");
}

inline int run(const RunConfig& cfg, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
    try {
        execute(cfg, log).commit(cfg.out);
        return 0;
    } catch (const Error& e) {
        err << "coopetition: " << category_name(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "coopetition: " << category_name(ErrorKind::io) << ": " << e.what() << "\n";
        return exit_code(ErrorKind::io);
    }
}

} // namespace coop::cli
