#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopetition/equilibrium.hpp"
#include "coopetition/io/output.hpp"
#include "coopetition/metrics.hpp"
#include "coopetition/scenario.hpp"
#include "coopetition/sweep.hpp"
#include "coopetition/validation.hpp"

namespace coop::io {

namespace columns {
inline constexpr std::array<std::string_view, 7> trajectory{
    "period", "phase", "depender", "dependee", "signal", "trust", "reputation_damage"};
inline constexpr std::array<std::string_view, 5> utilities{"period", "phase", "actor", "action", "utility"};
inline constexpr std::array<std::string_view, 4> sensitivity{"parameter", "metric", "pearson_r", "degenerate"};
inline constexpr std::array<std::string_view, 2> metrics{"metric", "value"};
inline constexpr std::array<std::string_view, 8> policy{
    "trust_12", "reputation_12", "trust_21", "reputation_21", "action_1", "action_2", "value_1", "value_2"};
inline constexpr std::array<std::string_view, 2> convergence{"sweep", "residual"};
inline constexpr std::array<std::string_view, 7> equilibrium_path{
    "period", "action_1", "action_2", "trust_12", "reputation_12", "trust_21", "reputation_21"};
} // namespace columns

// One row per period and directed dyad, state at the end of the period.
inline std::string trajectory_csv(const Trajectory& traj) {
    CsvWriter w(columns::trajectory);
    const std::size_t n = traj.actors.size();
    for (const auto& rec : traj.records)
        for (std::size_t k = 0; k < rec.dyads.size(); ++k) {
            const std::size_t i = k / (n - 1), jj = k % (n - 1), j = jj >= i ? jj + 1 : jj;
            w.cell(rec.period).cell(rec.phase).cell(traj.actors[i].id).cell(traj.actors[j].id);
            w.cell(rec.signals[k]).cell(rec.dyads[k].trust).cell(rec.dyads[k].reputation_damage);
            w.end_row();
        }
    return w.str();
}

inline std::string utilities_csv(const Trajectory& traj) {
    CsvWriter w(columns::utilities);
    for (const auto& rec : traj.records)
        for (std::size_t i = 0; i < traj.actors.size(); ++i) {
            w.cell(rec.period).cell(rec.phase).cell(traj.actors[i].id).cell(rec.actions[i]).cell(rec.utilities[i]);
            w.end_row();
        }
    return w.str();
}

inline std::vector<std::string_view> sweep_outcome_header() {
    std::vector<std::string_view> h{"id"};
    h.insert(h.end(), GridSpec::names.begin(), GridSpec::names.end());
    h.insert(h.end(), ConfigOutcome::names.begin(), ConfigOutcome::names.end());
    return h;
}

inline std::string sweep_outcomes_csv(const GridSpec& g, const std::vector<ConfigOutcome>& outcomes) {
    std::string out;
    const auto header = sweep_outcome_header();
    for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + std::string(header[k]);
    out += '\n';
    out.reserve(outcomes.size() * 160);
    for (std::size_t id = 0; id < outcomes.size(); ++id) {
        out += std::to_string(id);
        for (double x : grid_point(g, id)) out += ',' + format_csv(x);
        for (double x : outcomes[id].values()) out += ',' + format_csv(x);
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json summary_json(const stats::Summary& s) {
    return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3},
            {"max", s.max}, {"mean", s.mean}, {"std", s.std}};
}

inline std::string sweep_summary_json(const std::vector<ConfigOutcome>& outcomes, std::size_t frontier_size) {
    const SweepSummary s = summarize(outcomes);
    nlohmann::ordered_json j;
    j["configurations"] = outcomes.size();
    j["pareto_frontier_size"] = frontier_size;
    for (std::size_t m = 0; m < ConfigOutcome::count; ++m) j["metrics"][std::string(ConfigOutcome::names[m])] = summary_json(s[m]);
    return j.dump(2) + "\n";
}

inline std::string sensitivity_csv(const SensitivityMatrix& s) {
    CsvWriter w(columns::sensitivity);
    for (std::size_t p = 0; p < GridSpec::dims; ++p)
        for (std::size_t m = 0; m < ConfigOutcome::count; ++m) {
            w.cell(GridSpec::names[p]).cell(ConfigOutcome::names[m]).cell(s.cells[p][m].r).cell(s.cells[p][m].degenerate);
            w.end_row();
        }
    return w.str();
}

inline std::string pareto_csv(const GridSpec& g, const std::vector<ParetoMember>& frontier) {
    std::string out = "id";
    for (auto n : GridSpec::names) out += "," + std::string(n);
    out += ",negativity_deviation,hysteresis_recovery,cumulative_amplification\n";
    for (const auto& m : frontier) {
        out += std::to_string(m.id);
        for (double x : grid_point(g, m.id)) out += ',' + format_csv(x);
        out += ',' + format_csv(m.negativity_deviation) + ',' + format_csv(m.hysteresis_recovery) + ',' +
               format_csv(m.cumulative_amplification) + '\n';
    }
    return out;
}

inline std::string metrics_csv(const ConfigOutcome& o) {
    CsvWriter w(columns::metrics);
    const auto v = o.values();
    for (std::size_t m = 0; m < ConfigOutcome::count; ++m) {
        w.cell(ConfigOutcome::names[m]).cell(v[m]);
        w.end_row();
    }
    return w.str();
}

inline nlohmann::ordered_json dimension_json(const DimensionScore& d) {
    nlohmann::ordered_json j;
    j["score"] = d.score;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : d.checks)
        j["checks"].push_back({{"name", c.name}, {"points", c.points}, {"max_points", c.max_points}, {"evidence", c.evidence}});
    return j;
}

inline const char* to_string(stats::AnovaStatus s) {
    switch (s) {
    case stats::AnovaStatus::ok: return "ok";
    case stats::AnovaStatus::infinite: return "infinite";
    case stats::AnovaStatus::degenerate: return "degenerate";
    }
    return "?";
}

inline std::string validation_json(const ValidationReport& r) {
    nlohmann::ordered_json j;
    j["total"] = r.total;
    j["alignment"] = dimension_json(r.alignment);
    j["behavioral"] = dimension_json(r.behavioral);
    j["mechanism"] = dimension_json(r.mechanism);
    j["outcome"] = dimension_json(r.outcome);
    j["anova"] = {{"F", r.anova.F}, {"df_between", r.anova.df_between}, {"df_within", r.anova.df_within},
                  {"p", r.anova.p}, {"status", to_string(r.anova.status)}};
    j["regressions"] = nlohmann::ordered_json::array();
    for (const auto& g : r.regressions)
        j["regressions"].push_back({{"phase", g.phase}, {"slope", g.fit.slope}, {"intercept", g.fit.intercept},
                                    {"t", g.fit.t}, {"p", g.fit.p}, {"n", g.fit.n}, {"significant", g.fit.p < 0.05}});
    return j.dump(2) + "\n";
}

inline std::string validation_text(const ValidationReport& r) {
    std::string out;
    auto dim = [&](const char* name, const DimensionScore& d) {
        out += std::string(name) + ": " + std::to_string(d.score) + "/15\n";
        for (const auto& c : d.checks)
            out += "  " + c.name + " " + std::to_string(c.points) + "/" + std::to_string(c.max_points) + "  " + c.evidence + "\n";
    };
    dim("alignment", r.alignment);
    dim("behavioral", r.behavioral);
    dim("mechanism", r.mechanism);
    dim("outcome", r.outcome);
    out += "total: " + std::to_string(r.total) + "/60\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "anova: F(%d,%d) = %.4g, p = %.3g (%s)\n", r.anova.df_between, r.anova.df_within,
                  r.anova.F, r.anova.p, to_string(r.anova.status));
    out += buf;
    for (const auto& g : r.regressions) {
        std::snprintf(buf, sizeof buf, "trend %s: slope %.5f, p = %.3g\n", g.phase.c_str(), g.fit.slope, g.fit.p);
        out += buf;
    }
    return out;
}

inline std::string policy_csv(const EquilibriumSolution& sol) {
    CsvWriter w(columns::policy);
    const auto& g = sol.policy.grid();
    const JointIndexer ix(g);
    for (std::size_t s = 0; s < ix.size(); ++s) {
        const std::size_t d12 = ix.d12(s), d21 = ix.d21(s);
        w.cell(g.trust_levels[ix.trust_of(d12)]).cell(g.reputation_levels[ix.reputation_of(d12)]);
        w.cell(g.trust_levels[ix.trust_of(d21)]).cell(g.reputation_levels[ix.reputation_of(d21)]);
        w.cell(sol.policy.action(0, s)).cell(sol.policy.action(1, s)).cell(sol.value.at(0, s)).cell(sol.value.at(1, s));
        w.end_row();
    }
    return w.str();
}

inline std::string convergence_csv(const EquilibriumSolution& sol) {
    CsvWriter w(columns::convergence);
    for (std::size_t k = 0; k < sol.residuals.size(); ++k) {
        w.cell(k + 1).cell(sol.residuals[k]);
        w.end_row();
    }
    return w.str();
}

inline std::string equilibrium_path_csv(const Trajectory& path) {
    CsvWriter w(columns::equilibrium_path);
    for (const auto& rec : path.records) {
        w.cell(rec.period).cell(rec.actions[0]).cell(rec.actions[1]);
        w.cell(rec.dyads[0].trust).cell(rec.dyads[0].reputation_damage).cell(rec.dyads[1].trust).cell(rec.dyads[1].reputation_damage);
        w.end_row();
    }
    return w.str();
}

inline std::string equilibrium_json(const EquilibriumSolution& sol, std::optional<int> horizon) {
    const auto mono = policy_monotonicity(sol.policy);
    nlohmann::ordered_json j;
    j["horizon"] = horizon ? nlohmann::ordered_json(*horizon) : nlohmann::ordered_json("infinite");
    j["sweeps"] = sol.sweeps;
    j["residual"] = sol.residual;
    j["unresolved_states"] = sol.unresolved_states;
    j["monotone_fraction"] = mono.fraction_monotone();
    j["monotone_violations"] = mono.violations;
    j["monotone_slices"] = mono.slices;
    return j.dump(2) + "\n";
}

} // namespace coop::io
