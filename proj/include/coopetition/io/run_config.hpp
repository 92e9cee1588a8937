#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "coopetition/equilibrium.hpp"
#include "coopetition/io/scenario_file.hpp"
#include "coopetition/metrics.hpp"
#include "coopetition/sweep.hpp"

namespace coop::io {

struct SweepConfig {
    GridSpec grid;
    MetricProbeSpec probe;

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

inline void parse_probe_section(const Section& sec, const std::string& src, MetricProbeSpec& p) {
    const Fields f(sec, src,
                   {"build_periods", "build_initial_trust", "build_deviation", "recovery_window", "pre_violation_trust",
                    "initial_R", "severe_deviation", "moderate_deviation", "cooperation_deviation",
                    "small_violation_count", "small_violation_deviation", "settle_periods", "recovery_violation_periods",
                    "recovery_horizon", "probe_dependency", "D_high", "D_low", "reference_kappa"});
    f.maybe("build_periods", p.build_periods);
    f.maybe("build_initial_trust", p.build_initial_trust);
    f.maybe("build_deviation", p.build_deviation);
    f.maybe("recovery_window", p.recovery_window);
    f.maybe("pre_violation_trust", p.pre_violation_trust);
    f.maybe("initial_R", p.initial_R);
    f.maybe("severe_deviation", p.severe_deviation);
    f.maybe("moderate_deviation", p.moderate_deviation);
    f.maybe("cooperation_deviation", p.cooperation_deviation);
    f.maybe("small_violation_count", p.small_violation_count);
    f.maybe("small_violation_deviation", p.small_violation_deviation);
    f.maybe("settle_periods", p.settle_periods);
    f.maybe("recovery_violation_periods", p.recovery_violation_periods);
    f.maybe("recovery_horizon", p.recovery_horizon);
    f.maybe("probe_dependency", p.probe_dependency);
    f.maybe("D_high", p.D_high);
    f.maybe("D_low", p.D_low);
    f.maybe("reference_kappa", p.reference_kappa);
    detail::with_location(src, sec.number, [&] { validate(p); return 0; });
}

inline std::string emit_probe(const MetricProbeSpec& p) {
    std::string out = "[probe]\n";
    auto i = [&](const char* k, int v) { out += std::string(k) + " = " + std::to_string(v) + "\n"; };
    auto d = [&](const char* k, double v) { out += std::string(k) + " = " + format_exact(v) + "\n"; };
    i("build_periods", p.build_periods);
    d("build_initial_trust", p.build_initial_trust);
    d("build_deviation", p.build_deviation);
    i("recovery_window", p.recovery_window);
    d("pre_violation_trust", p.pre_violation_trust);
    d("initial_R", p.initial_R);
    d("severe_deviation", p.severe_deviation);
    d("moderate_deviation", p.moderate_deviation);
    d("cooperation_deviation", p.cooperation_deviation);
    i("small_violation_count", p.small_violation_count);
    d("small_violation_deviation", p.small_violation_deviation);
    i("settle_periods", p.settle_periods);
    i("recovery_violation_periods", p.recovery_violation_periods);
    i("recovery_horizon", p.recovery_horizon);
    d("probe_dependency", p.probe_dependency);
    d("D_high", p.D_high);
    d("D_low", p.D_low);
    d("reference_kappa", p.reference_kappa);
    return out;
}

// [grid] holds one level list per parameter plus discount; [probe] the probe
// protocol. Both are optional and default to the standard design.
inline SweepConfig parse_sweep_config(const Document& doc) {
    const std::string& src = doc.source;
    for (const auto& s : doc.sections)
        if (s.name != "grid" && s.name != "probe") throw ParseError(src, s.number, "unknown section [" + s.name + "]");
    SweepConfig c;
    if (const Section* g = detail::unique_section(doc, "grid", false)) {
        std::set<std::string, std::less<>> keys{"discount"};
        for (auto name : GridSpec::names) keys.emplace(name);
        const Fields f(*g, src, keys);
        for (std::size_t d = 0; d < GridSpec::dims; ++d) {
            const std::string key(GridSpec::names[d]);
            if (f.has(key)) c.grid.levels[d] = f.numbers(key);
        }
        f.maybe("discount", c.grid.discount);
        detail::with_location(src, g->number, [&] { validate(c.grid); return 0; });
    }
    if (const Section* p = detail::unique_section(doc, "probe", false)) parse_probe_section(*p, src, c.probe);
    return c;
}

inline std::string emit_sweep_config(const SweepConfig& c) {
    std::string out = "[grid]\n";
    for (std::size_t d = 0; d < GridSpec::dims; ++d)
        out += std::string(GridSpec::names[d]) + " = " + format_exact(c.grid.levels[d]) + "\n";
    out += "discount = " + format_exact(c.grid.discount) + "\n\n" + emit_probe(c.probe);
    return out;
}

inline SweepConfig load_sweep_config(const std::string& location, const std::vector<Override>& overrides = {}) {
    Document doc = location == "default" ? Document{"default", {}} : parse_document(read_file(location), location);
    apply_overrides(doc, overrides);
    return parse_sweep_config(doc);
}

struct EquilibriumSettings {
    int trust_levels = 21;
    int reputation_levels = 11;
    double action_max = 3.0;
    int action_levels = 13;
    int horizon = 0;  // 0: infinite
    double tolerance = 1e-6;
    int max_sweeps = 10000;
    int max_inner = 50;
    int path_periods = 60;

    friend bool operator==(const EquilibriumSettings&, const EquilibriumSettings&) = default;
};

inline EquilibriumSettings parse_equilibrium_section(const Document& doc) {
    EquilibriumSettings e;
    const Section* s = detail::unique_section(doc, "equilibrium", false);
    if (!s) return e;
    const Fields f(*s, doc.source,
                   {"trust_levels", "reputation_levels", "action_max", "action_levels", "horizon", "tolerance",
                    "max_sweeps", "max_inner", "path_periods"});
    f.maybe("trust_levels", e.trust_levels);
    f.maybe("reputation_levels", e.reputation_levels);
    f.maybe("action_max", e.action_max);
    f.maybe("action_levels", e.action_levels);
    f.maybe("horizon", e.horizon);
    f.maybe("tolerance", e.tolerance);
    f.maybe("max_sweeps", e.max_sweeps);
    f.maybe("max_inner", e.max_inner);
    f.maybe("path_periods", e.path_periods);
    if (e.trust_levels < 2 || e.reputation_levels < 2 || e.action_levels < 2)
        throw ModelError("equilibrium grids need at least two levels");
    if (!(e.action_max > 0.0)) throw ModelError("equilibrium action_max must be positive");
    if (e.horizon < 0 || e.path_periods < 0) throw ModelError("equilibrium horizon and path_periods must be nonnegative");
    return e;
}

inline std::string emit_equilibrium_settings(const EquilibriumSettings& e) {
    return "[equilibrium]\ntrust_levels = " + std::to_string(e.trust_levels) +
           "\nreputation_levels = " + std::to_string(e.reputation_levels) + "\naction_max = " + format_exact(e.action_max) +
           "\naction_levels = " + std::to_string(e.action_levels) + "\nhorizon = " + std::to_string(e.horizon) +
           "\ntolerance = " + format_exact(e.tolerance) + "\nmax_sweeps = " + std::to_string(e.max_sweeps) +
           "\nmax_inner = " + std::to_string(e.max_inner) + "\npath_periods = " + std::to_string(e.path_periods) + "\n";
}

inline EquilibriumProblem equilibrium_problem(const Scenario& s, const EquilibriumSettings& e) {
    if (s.actors.size() != 2) throw ModelError("equilibrium command needs a two-actor scenario");
    EquilibriumProblem p;
    p.grid = {even_levels(0.0, 1.0, std::size_t(e.trust_levels)), even_levels(0.0, 1.0, std::size_t(e.reputation_levels)),
              even_levels(0.0, e.action_max, std::size_t(e.action_levels))};
    p.econ = s.econ;
    p.D = s.D;
    p.params = s.trust_params;
    return p;
}

inline SolverOptions solver_options(const EquilibriumSettings& e) {
    SolverOptions o;
    if (e.horizon > 0) o.horizon = e.horizon;
    o.tolerance = e.tolerance;
    o.max_sweeps = e.max_sweeps;
    o.max_inner = e.max_inner;
    return o;
}

} // namespace coop::io
