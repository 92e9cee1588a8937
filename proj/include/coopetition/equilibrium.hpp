#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coopetition/economy.hpp"
#include "coopetition/error.hpp"
#include "coopetition/interdependence.hpp"
#include "coopetition/scenario.hpp"
#include "coopetition/trust.hpp"

namespace coop {

struct StateGrid {
    std::vector<double> trust_levels;
    std::vector<double> reputation_levels;
    std::vector<double> action_levels;

    friend bool operator==(const StateGrid&, const StateGrid&) = default;
};

inline std::vector<double> even_levels(double lo, double hi, std::size_t count) {
    if (count < 2) throw ModelError("even_levels needs at least two points");
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = lo + (hi - lo) * double(k) / double(count - 1);
    return v;
}

inline StateGrid default_state_grid() {
    return {even_levels(0.0, 1.0, 21), even_levels(0.0, 1.0, 11), even_levels(0.0, 3.0, 13)};
}

inline void validate(const StateGrid& g) {
    auto increasing = [](const std::vector<double>& v, const char* name) {
        if (v.empty()) throw ModelError(std::string(name) + " must not be empty");
        for (std::size_t k = 1; k < v.size(); ++k)
            if (!(v[k] > v[k - 1])) throw ModelError(std::string(name) + " must be strictly increasing");
    };
    increasing(g.trust_levels, "trust_levels");
    increasing(g.reputation_levels, "reputation_levels");
    increasing(g.action_levels, "action_levels");
    for (const auto* v : {&g.trust_levels, &g.reputation_levels})
        if (v->front() != 0.0 || v->back() != 1.0) throw ModelError("state levels must span [0,1] with both endpoints");
    if (g.action_levels.front() < 0.0) throw ModelError("action levels must be nonnegative");
}

// Index of the nearest level; exact midpoints go to the lower level.
inline std::size_t nearest_level(const std::vector<double>& levels, double x) {
    auto it = std::lower_bound(levels.begin(), levels.end(), x);
    if (it == levels.begin()) return 0;
    if (it == levels.end()) return levels.size() - 1;
    const std::size_t hi = std::size_t(it - levels.begin());
    return (x - levels[hi - 1] <= levels[hi] - x) ? hi - 1 : hi;
}

// Two actors; the joint state is (T12, R12, T21, R21) on the grid.
class JointIndexer {
public:
    explicit JointIndexer(const StateGrid& g) : nt_(g.trust_levels.size()), nr_(g.reputation_levels.size()) {}

    std::size_t dyad_count() const noexcept { return nt_ * nr_; }
    std::size_t size() const noexcept { return dyad_count() * dyad_count(); }
    std::size_t dyad(std::size_t t, std::size_t r) const noexcept { return t * nr_ + r; }
    std::size_t joint(std::size_t d12, std::size_t d21) const noexcept { return d12 * dyad_count() + d21; }
    std::size_t d12(std::size_t joint) const noexcept { return joint / dyad_count(); }
    std::size_t d21(std::size_t joint) const noexcept { return joint % dyad_count(); }
    std::size_t trust_of(std::size_t dyad) const noexcept { return dyad / nr_; }
    std::size_t reputation_of(std::size_t dyad) const noexcept { return dyad % nr_; }

private:
    std::size_t nt_, nr_;
};

struct EquilibriumProblem {
    StateGrid grid = default_state_grid();
    EconomyParams econ = default_economy(2);
    InterdependenceMatrix D = InterdependenceMatrix(2);
    TrustParams params;
};

inline void validate(const EquilibriumProblem& p) {
    validate(p.grid);
    validate(p.econ);
    if (p.econ.n != 2 || p.D.size() != 2) throw ModelError("equilibrium computation supports exactly two actors");
}

struct ValueFunction {
    StateGrid grid;
    std::array<std::vector<double>, 2> values;

    double at(std::size_t actor, std::size_t joint) const { return values.at(actor).at(joint); }
};

class Policy {
public:
    Policy() = default;
    Policy(StateGrid grid, std::array<std::vector<std::size_t>, 2> action_index)
        : grid_(std::move(grid)), index_(std::move(action_index)) {
        const std::size_t n = JointIndexer(grid_).size();
        for (const auto& v : index_) {
            if (v.size() != n) throw ModelError("policy size does not match the state grid");
            for (std::size_t a : v)
                if (a >= grid_.action_levels.size()) throw ModelError("policy action outside action levels");
        }
    }

    static Policy constant(const StateGrid& grid, double a1, double a2) {
        auto find = [&](double a) {
            auto it = std::find(grid.action_levels.begin(), grid.action_levels.end(), a);
            if (it == grid.action_levels.end()) throw ModelError("constant policy action is not an action level");
            return std::size_t(it - grid.action_levels.begin());
        };
        const std::size_t n = JointIndexer(grid).size();
        return Policy(grid, {std::vector<std::size_t>(n, find(a1)), std::vector<std::size_t>(n, find(a2))});
    }

    const StateGrid& grid() const noexcept { return grid_; }
    std::size_t action_index(std::size_t actor, std::size_t joint) const { return index_.at(actor).at(joint); }
    double action(std::size_t actor, std::size_t joint) const { return grid_.action_levels[action_index(actor, joint)]; }

    // Nearest grid state for a continuous two-actor state.
    std::size_t locate(const SystemState& s) const {
        if (s.actors() != 2) throw ModelError("policy lookup needs a two-actor state");
        JointIndexer ix(grid_);
        auto dyad = [&](const DyadState& d) {
            return ix.dyad(nearest_level(grid_.trust_levels, d.trust), nearest_level(grid_.reputation_levels, d.reputation_damage));
        };
        return ix.joint(dyad(s.at(0, 1)), dyad(s.at(1, 0)));
    }

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    StateGrid grid_;
    std::array<std::vector<std::size_t>, 2> index_;
};

struct SolverOptions {
    std::optional<int> horizon;  // empty: infinite horizon
    double tolerance = 1e-6;
    int max_sweeps = 10000;
    int max_inner = 50;
};

struct EquilibriumSolution {
    ValueFunction value;              // period-0 values
    Policy policy;                    // period-0 (stationary for infinite horizon) policy
    std::vector<Policy> schedule;     // finite horizon: policy per period
    int sweeps = 0;
    double residual = 0.0;
    std::vector<double> residuals;    // sup-norm change per sweep
    std::size_t unresolved_states = 0;  // last sweep: stage games settled by matrix search
};

class NonConvergenceError : public ModelError {
public:
    NonConvergenceError(int sweeps, double residual)
        : ModelError("value iteration did not converge after " + std::to_string(sweeps) +
                     " sweeps (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Grid-search argmax of the extended utility; ties go to the smallest action.
inline double static_best_response(std::size_t actor, std::span<const double> others_actions,
                                   std::span<const double> trust_row, const InterdependenceMatrix& D,
                                   const EconomyParams& econ, const TrustParams& params,
                                   const std::vector<double>& action_levels) {
    if (action_levels.empty()) throw ModelError("no action levels");
    std::vector<double> actions(others_actions.begin(), others_actions.end());
    if (actor >= actions.size()) throw ModelError("actor index out of range");
    double best_a = action_levels.front();
    double best_u = -std::numeric_limits<double>::infinity();
    for (double a : action_levels) {
        actions[actor] = a;
        const double u = extended_utility(actor, actions, trust_row, D, econ, params);
        if (u > best_u) {
            best_u = u;
            best_a = a;
        }
    }
    return best_a;
}

namespace detail {

// Stage payoffs and grid successors precomputed for a two-actor problem.
class StageModel {
public:
    explicit StageModel(const EquilibriumProblem& p) : p_(p), ix_(p.grid) {
        validate(p);
        const auto& g = p.grid;
        na_ = g.action_levels.size();
        base_.assign(2 * na_ * na_, 0.0);
        for (std::size_t a1 = 0; a1 < na_; ++a1)
            for (std::size_t a2 = 0; a2 < na_; ++a2) {
                const std::array<double, 2> acts{g.action_levels[a1], g.action_levels[a2]};
                for (std::size_t i = 0; i < 2; ++i) base_[(i * na_ + a1) * na_ + a2] = base_utility(i, acts, p.D, p.econ);
            }
        recip_.assign(2 * na_, 0.0);
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t a = 0; a < na_; ++a)
                recip_[j * na_ + a] = reciprocity_term(g.action_levels[a] - p.econ.baselines[j], p.econ, p.params);
        // succ_[dir]: dir 0 is dyad (1,2) watching actor 2, dir 1 is dyad (2,1) watching actor 1
        for (std::size_t dir = 0; dir < 2; ++dir) {
            const std::size_t observer = dir, partner = 1 - dir;
            auto& table = succ_[dir];
            table.assign(ix_.dyad_count() * na_, 0);
            for (std::size_t t = 0; t < g.trust_levels.size(); ++t)
                for (std::size_t r = 0; r < g.reputation_levels.size(); ++r)
                    for (std::size_t a = 0; a < na_; ++a) {
                        const DyadState next = dyad_step(DyadState{g.trust_levels[t], g.reputation_levels[r]},
                                                         g.action_levels[a], p.econ.baselines[partner],
                                                         p.D(observer, partner), p.params);
                        table[ix_.dyad(t, r) * na_ + a] =
                            ix_.dyad(nearest_level(g.trust_levels, next.trust),
                                     nearest_level(g.reputation_levels, next.reputation_damage));
                    }
        }
    }

    std::size_t actions() const noexcept { return na_; }
    const JointIndexer& indexer() const noexcept { return ix_; }

    // Actor i's extended utility at joint state s under action indices (a1, a2).
    double utility(std::size_t i, std::size_t s, std::size_t a1, std::size_t a2) const {
        const std::size_t own_dyad = i == 0 ? ix_.d12(s) : ix_.d21(s);
        const double T = p_.grid.trust_levels[ix_.trust_of(own_dyad)];
        const std::size_t aj = i == 0 ? a2 : a1;
        const double ai = p_.grid.action_levels[i == 0 ? a1 : a2];
        return base_[(i * na_ + a1) * na_ + a2] + p_.params.rho() * T * recip_[(1 - i) * na_ + aj] * ai;
    }

    std::size_t successor(std::size_t s, std::size_t a1, std::size_t a2) const {
        return ix_.joint(succ_[0][ix_.d12(s) * na_ + a2], succ_[1][ix_.d21(s) * na_ + a1]);
    }

private:
    const EquilibriumProblem& p_;
    JointIndexer ix_;
    std::size_t na_ = 0;
    std::vector<double> base_;
    std::vector<double> recip_;
    std::array<std::vector<std::size_t>, 2> succ_;
};

struct StageResult {
    std::size_t a1, a2;
    double v1, v2;
    bool resolved;  // best-response iteration reached a fixed point
};

// Pure-strategy stage equilibrium. The previous sweep's profile is kept while
// it remains an equilibrium; otherwise best responses alternate from the
// highest action profile. If that cycles, the full payoff matrix is searched:
// the pure equilibrium with the largest joint action wins; without one the
// previous profile is kept, or on first visit the smallest worst-case regret.
inline StageResult solve_stage(const StageModel& m, std::size_t s, const std::array<std::vector<double>, 2>& cont,
                               double beta, int max_inner, std::size_t prev1, std::size_t prev2) {
    const std::size_t na = m.actions();
    auto q = [&](std::size_t i, std::size_t b1, std::size_t b2) {
        return m.utility(i, s, b1, b2) + beta * cont[i][m.successor(s, b1, b2)];
    };
    auto best = [&](std::size_t i, std::size_t other) {
        std::size_t arg = 0;
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < na; ++a) {
            const double v = i == 0 ? q(0, a, other) : q(1, other, a);
            if (v > top) {
                top = v;
                arg = a;
            }
        }
        return arg;
    };
    if (prev1 < na && best(0, prev2) == prev1 && best(1, prev1) == prev2)
        return {prev1, prev2, q(0, prev1, prev2), q(1, prev1, prev2), true};
    std::size_t a1 = na - 1, a2 = na - 1;
    for (int k = 0; k < max_inner; ++k) {
        const std::size_t n1 = best(0, a2);
        const std::size_t n2 = best(1, n1);
        if (n1 == a1 && n2 == a2) return {a1, a2, q(0, a1, a2), q(1, a1, a2), true};
        a1 = n1;
        a2 = n2;
    }

    std::vector<double> q1(na * na), q2(na * na);
    for (std::size_t b1 = 0; b1 < na; ++b1)
        for (std::size_t b2 = 0; b2 < na; ++b2) {
            q1[b1 * na + b2] = q(0, b1, b2);
            q2[b1 * na + b2] = q(1, b1, b2);
        }
    std::vector<double> col_max(na, -std::numeric_limits<double>::infinity()), row_max = col_max;
    for (std::size_t b1 = 0; b1 < na; ++b1)
        for (std::size_t b2 = 0; b2 < na; ++b2) {
            col_max[b2] = std::max(col_max[b2], q1[b1 * na + b2]);
            row_max[b1] = std::max(row_max[b1], q2[b1 * na + b2]);
        }
    bool found = false;
    std::size_t pick1 = 0, pick2 = 0;
    double pick_regret = std::numeric_limits<double>::infinity();
    for (std::size_t b1 = na; b1-- > 0;)
        for (std::size_t b2 = na; b2-- > 0;) {
            const double regret = std::max(col_max[b2] - q1[b1 * na + b2], row_max[b1] - q2[b1 * na + b2]);
            const bool equilibrium = regret <= 0.0;
            if (equilibrium && (!found || b1 + b2 > pick1 + pick2)) {
                found = true;
                pick1 = b1;
                pick2 = b2;
            } else if (!found && regret < pick_regret) {
                pick_regret = regret;
                pick1 = b1;
                pick2 = b2;
            }
        }
    if (!found && prev1 < na) {
        pick1 = prev1;
        pick2 = prev2;
    }
    return {pick1, pick2, q1[pick1 * na + pick2], q2[pick1 * na + pick2], false};
}

} // namespace detail

inline EquilibriumSolution value_iteration(const EquilibriumProblem& problem, const SolverOptions& options = {}) {
    const detail::StageModel model(problem);
    const std::size_t n = model.indexer().size();
    const double beta = problem.params.discount();
    if (!(options.tolerance > 0.0)) throw ModelError("tolerance must be positive");
    if (options.max_sweeps < 1 || options.max_inner < 1) throw ModelError("sweep caps must be positive");
    if (options.horizon && *options.horizon < 1) throw ModelError("finite horizon must be at least 1");

    std::array<std::vector<double>, 2> V{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    std::array<std::vector<double>, 2> next = V;
    const std::size_t none = model.actions();
    std::array<std::vector<std::size_t>, 2> act{std::vector<std::size_t>(n, none), std::vector<std::size_t>(n, none)};
    EquilibriumSolution sol;

    auto sweep = [&]() {
        double residual = 0.0;
        std::size_t unresolved = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const auto r = detail::solve_stage(model, s, V, beta, options.max_inner, act[0][s], act[1][s]);
            next[0][s] = r.v1;
            next[1][s] = r.v2;
            act[0][s] = r.a1;
            act[1][s] = r.a2;
            if (!r.resolved) ++unresolved;
            residual = std::max({residual, std::abs(r.v1 - V[0][s]), std::abs(r.v2 - V[1][s])});
        }
        std::swap(V, next);
        sol.residuals.push_back(residual);
        sol.unresolved_states = unresolved;
        return residual;
    };

    if (options.horizon) {
        std::vector<Policy> backwards;
        for (int t = *options.horizon - 1; t >= 0; --t) {
            sweep();
            backwards.emplace_back(problem.grid, act);
        }
        sol.schedule.assign(backwards.rbegin(), backwards.rend());
        sol.sweeps = *options.horizon;
        sol.residual = sol.residuals.back();
    } else {
        if (!(beta < 1.0)) throw ModelError("infinite horizon needs discount < 1");
        double residual = 0.0;
        for (int k = 1;; ++k) {
            residual = sweep();
            if (residual < options.tolerance) {
                sol.sweeps = k;
                break;
            }
            if (k >= options.max_sweeps) throw NonConvergenceError(k, residual);
        }
        sol.residual = residual;
    }
    sol.value = ValueFunction{problem.grid, V};
    sol.policy = options.horizon ? sol.schedule.front() : Policy(problem.grid, act);
    return sol;
}

// Closed-loop run: actions come from the policy at the nearest grid state,
// transitions use the continuous trust dynamics.
inline Trajectory simulate_equilibrium_path(const Policy& policy, const EquilibriumProblem& problem,
                                            const SystemState& initial, int periods,
                                            const std::string& phase_name = "equilibrium") {
    validate(problem);
    if (!(policy.grid() == problem.grid)) throw ModelError("policy grid does not match the problem grid");
    if (periods < 0) throw ModelError("period count must be nonnegative");
    if (initial.actors() != 2) throw ModelError("equilibrium path needs a two-actor state");
    Trajectory traj;
    traj.actors = {{"actor1", "Actor 1"}, {"actor2", "Actor 2"}};
    traj.initial = initial;
    SystemState state = initial;
    for (int t = 0; t < periods; ++t) {
        const std::size_t s = policy.locate(state);
        const std::array<double, 2> actions{policy.action(0, s), policy.action(1, s)};
        PeriodRecord rec;
        rec.period = state.period();
        rec.phase = phase_name;
        rec.actions.assign(actions.begin(), actions.end());
        for (std::size_t i = 0; i < 2; ++i) {
            std::array<double, 2> row{};
            row[1 - i] = state.at(i, 1 - i).trust;
            rec.utilities.push_back(extended_utility(i, actions, row, problem.D, problem.econ, problem.params));
        }
        for (std::size_t k = 0; k < state.dyad_count(); ++k) {
            const std::size_t j = state.pair_of(k).second;
            rec.signals.push_back(
                cooperation_signal(actions[j], problem.econ.baselines[j], problem.params.kappa_trust()).value());
        }
        SystemState next = system_step(state, actions, problem.econ.baselines, problem.D, problem.params);
        rec.dyads = next.dyads();
        traj.records.push_back(std::move(rec));
        state = std::move(next);
    }
    return traj;
}

struct MonotonicityReport {
    std::size_t slices = 0;
    std::size_t violations = 0;
    double fraction_monotone() const { return slices == 0 ? 1.0 : 1.0 - double(violations) / double(slices); }
};

// Share of slices where an actor's action is nondecreasing in its own trust
// index, holding its reputation index and the partner's dyad fixed.
inline MonotonicityReport policy_monotonicity(const Policy& policy) {
    const auto& g = policy.grid();
    const JointIndexer ix(g);
    const std::size_t nt = g.trust_levels.size(), nr = g.reputation_levels.size();
    MonotonicityReport rep;
    for (std::size_t actor = 0; actor < 2; ++actor)
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t other = 0; other < ix.dyad_count(); ++other) {
                ++rep.slices;
                std::size_t prev = 0;
                for (std::size_t t = 0; t < nt; ++t) {
                    const std::size_t own = ix.dyad(t, r);
                    const std::size_t s = actor == 0 ? ix.joint(own, other) : ix.joint(other, own);
                    const std::size_t a = policy.action_index(actor, s);
                    if (t > 0 && a < prev) {
                        ++rep.violations;
                        break;
                    }
                    prev = a;
                }
            }
    return rep;
}

} // namespace coop
