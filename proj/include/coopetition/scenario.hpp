#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coopetition/economy.hpp"
#include "coopetition/error.hpp"
#include "coopetition/istar.hpp"
#include "coopetition/trust.hpp"

namespace coop {

struct PhaseSpec {
    std::string name;
    int duration = 1;
    std::vector<double> deviation;           // per actor, action minus baseline
    std::optional<double> reference_trust;   // documented phase-mean trust, if any

    friend bool operator==(const PhaseSpec&, const PhaseSpec&) = default;
};

struct Scenario {
    std::string name;
    std::vector<Actor> actors;
    std::vector<PhaseSpec> phases;
    SystemState initial;
    TrustParams trust_params;
    EconomyParams econ;
    InterdependenceMatrix D;

    int total_duration() const {
        int total = 0;
        for (const auto& p : phases) total += p.duration;
        return total;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline void validate(const Scenario& s) {
    const std::size_t n = s.actors.size();
    if (n < 2) throw ModelError("scenario needs at least two actors");
    if (s.phases.empty()) throw ModelError("scenario needs at least one phase");
    for (const auto& p : s.phases) {
        if (p.duration < 1) throw ModelError("phase '" + p.name + "' duration must be >= 1");
        if (p.deviation.size() != n) throw ModelError("phase '" + p.name + "' deviation count does not match actors");
        for (double d : p.deviation)
            if (!std::isfinite(d)) throw ModelError("phase '" + p.name + "' has a non-finite deviation");
    }
    if (s.initial.actors() != n) throw ModelError("initial state actor count mismatch");
    if (s.D.size() != n) throw ModelError("interdependence matrix dimension mismatch");
    if (s.econ.n != n) throw ModelError("economy actor count mismatch");
    validate(s.econ);
}

struct PeriodRecord {
    std::size_t period = 0;
    std::string phase;
    std::vector<double> actions;    // floored at 0
    std::vector<double> signals;    // per dyad, lexicographic (i,j)
    std::vector<DyadState> dyads;   // post-step state, same order
    std::vector<double> utilities;  // per actor, evaluated with pre-step trust
};

struct Trajectory {
    std::vector<Actor> actors;
    SystemState initial;
    std::vector<PeriodRecord> records;

    std::size_t size() const noexcept { return records.size(); }

    // Dyad-mean trust at the end of period k.
    double mean_trust(std::size_t k) const { return mean_of(records.at(k).dyads, &DyadState::trust); }
    double mean_initial_trust() const { return mean_of(initial.dyads(), &DyadState::trust); }

    std::vector<double> mean_trust_series() const {
        std::vector<double> out(records.size());
        for (std::size_t k = 0; k < records.size(); ++k) out[k] = mean_trust(k);
        return out;
    }

    // Dyad-mean trust change during period k.
    double mean_trust_change(std::size_t k) const {
        return mean_trust(k) - (k == 0 ? mean_initial_trust() : mean_trust(k - 1));
    }

private:
    static double mean_of(const std::vector<DyadState>& ds, double DyadState::*field) {
        double s = 0.0;
        for (const auto& d : ds) s += d.*field;
        return ds.empty() ? 0.0 : s / double(ds.size());
    }
};

// Signals come from the raw deviations; utilities use actions floored at zero.
inline Trajectory simulate(const Scenario& scenario) {
    validate(scenario);
    const std::size_t n = scenario.actors.size();
    const auto& econ = scenario.econ;
    Trajectory traj{scenario.actors, scenario.initial, {}};
    traj.records.reserve(std::size_t(scenario.total_duration()));
    SystemState state = scenario.initial;
    std::vector<double> actions(n), trust_row(n);
    for (const auto& phase : scenario.phases) {
        for (int t = 0; t < phase.duration; ++t) {
            for (std::size_t i = 0; i < n; ++i) actions[i] = std::max(0.0, econ.baselines[i] + phase.deviation[i]);
            PeriodRecord rec;
            rec.period = state.period();
            rec.phase = phase.name;
            rec.actions = actions;
            rec.utilities.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) trust_row[j] = i == j ? 0.0 : state.at(i, j).trust;
                rec.utilities[i] = extended_utility(i, actions, trust_row, scenario.D, econ, scenario.trust_params);
            }
            SystemState next = system_step_deviations(state, phase.deviation, scenario.D, scenario.trust_params);
            rec.signals.resize(state.dyad_count());
            for (std::size_t k = 0; k < state.dyad_count(); ++k) {
                std::size_t j = state.pair_of(k).second;
                rec.signals[k] = signal_from_deviation(phase.deviation[j], scenario.trust_params.kappa_trust()).value();
            }
            rec.dyads = next.dyads();
            traj.records.push_back(std::move(rec));
            state = std::move(next);
        }
    }
    return traj;
}

// Bundled i* network for the Renault-Nissan alliance; phase 1 (formation) or
// phase 2 (mature cooperation) form of Nissan's dependencies.
inline DependencyNetwork renault_nissan_network(int phase = 2) {
    if (phase != 1 && phase != 2) throw ModelError("renault-nissan network phase must be 1 or 2");
    std::vector<Actor> actors{{"nissan", "Nissan Motor Co."}, {"renault", "Renault S.A."}};
    using K = DependumKind;
    std::vector<Dependum> deps;
    if (phase == 1) {
        deps.push_back({"nissan", "renault", "Financial Resources", K::resource, 0.50, 0.9});
        deps.push_back({"nissan", "renault", "European Market Access", K::resource, 0.30, 0.7});
        deps.push_back({"nissan", "renault", "Technology Sharing", K::task, 0.20, 0.6});
    } else {
        deps.push_back({"nissan", "renault", "Financial Resources", K::resource, 0.15, 0.3});
        deps.push_back({"nissan", "renault", "European Market Access", K::resource, 0.45, 0.7});
        deps.push_back({"nissan", "renault", "Technology Sharing", K::task, 0.40, 0.6});
    }
    deps.push_back({"renault", "nissan", "Asian Market Access", K::resource, 0.40, 0.8});
    deps.push_back({"renault", "nissan", "Platform & Expertise", K::resource, 0.35, 0.7});
    deps.push_back({"renault", "nissan", "Scale Economies", K::goal, 0.15, 0.6});
    deps.push_back({"renault", "nissan", "Operational Autonomy", K::softgoal, 0.10, 0.9});
    return DependencyNetwork(std::move(actors), std::move(deps));
}

inline TrustParams renault_nissan_params() {
    auto score = [](RubricParameter p, int s) { return rubric_to_value({p, s}); };
    using P = RubricParameter;
    TrustValues v;
    v.lambda_plus = score(P::lambda_plus, 4);
    v.lambda_minus = score(P::lambda_minus, 5);
    v.mu_R = score(P::mu_R, 5);
    v.delta_R = score(P::delta_R, 2);
    v.xi = score(P::xi, 4);
    v.rho = score(P::rho, 3);
    v.kappa_trust = score(P::kappa_trust, 4);
    v.discount = 0.95;
    return TrustParams(v);
}

inline Scenario renault_nissan_scenario() {
    Scenario s;
    s.name = "renault_nissan";
    DependencyNetwork net = renault_nissan_network(2);
    s.actors = net.actors();
    s.D = build_matrix(net);
    s.trust_params = renault_nissan_params();
    s.econ = default_economy(2);
    s.initial = SystemState(2, DyadState{0.5, 0.0});
    s.phases = {
        {"formation", 12, {1.5, 1.5}, 0.72},
        {"mature_cooperation", 40, {2.0, 2.0}, 0.97},
        {"crisis", 4, {-3.0, -3.0}, 0.15},
        {"recovery", 15, {1.2, 1.2}, 0.22},
        {"current", 9, {1.5, 1.5}, 0.43},
    };
    return s;
}

} // namespace coop
