#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "coopetition/error.hpp"
#include "coopetition/metrics.hpp"
#include "coopetition/stats.hpp"
#include "coopetition/trust.hpp"

namespace coop {

struct GridSpec {
    static constexpr std::size_t dims = 7;
    static constexpr std::array<std::string_view, dims> names{"lambda_plus", "lambda_minus", "mu_R", "delta_R",
                                                              "xi",          "rho",          "kappa_trust"};
    std::array<std::vector<double>, dims> levels{
        std::vector<double>{0.05, 0.075, 0.10, 0.125, 0.15},
        std::vector<double>{0.15, 0.225, 0.30, 0.375, 0.45},
        std::vector<double>{0.5, 0.55, 0.6, 0.65, 0.7},
        std::vector<double>{0.01, 0.02, 0.03, 0.04, 0.05},
        std::vector<double>{0.3, 0.4, 0.5, 0.6, 0.7},
        std::vector<double>{0.1, 0.15, 0.2, 0.25, 0.3},
        std::vector<double>{0.5, 0.75, 1.0, 1.25, 1.5}};
    double discount = 0.95;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline void validate(const GridSpec& g) {
    for (std::size_t d = 0; d < GridSpec::dims; ++d) {
        const auto& l = g.levels[d];
        if (l.empty()) throw ModelError("grid levels for " + std::string(GridSpec::names[d]) + " are empty");
        for (std::size_t k = 1; k < l.size(); ++k)
            if (!(l[k] > l[k - 1]))
                throw ModelError("grid levels for " + std::string(GridSpec::names[d]) + " must be strictly increasing");
    }
}

inline std::size_t grid_size(const GridSpec& g) {
    std::size_t n = 1;
    for (const auto& l : g.levels) n *= l.size();
    return n;
}

// Lexicographic order with the first parameter varying slowest; id 0 is all minima.
inline std::array<double, GridSpec::dims> grid_point(const GridSpec& g, std::size_t id) {
    if (id >= grid_size(g)) throw ModelError("configuration id out of range");
    std::array<double, GridSpec::dims> x{};
    for (std::size_t d = GridSpec::dims; d-- > 0;) {
        const std::size_t m = g.levels[d].size();
        x[d] = g.levels[d][id % m];
        id /= m;
    }
    return x;
}

inline TrustParams grid_params(const GridSpec& g, std::size_t id) {
    const auto x = grid_point(g, id);
    TrustValues v{x[0], x[1], x[2], x[3], x[4], x[5], x[6], g.discount};
    return TrustParams(v);
}

inline ConfigOutcome evaluate_config(const TrustParams& p, const MetricProbeSpec& probe) {
    ConfigOutcome o;
    o.negativity_ratio = negativity_ratio(p);
    o.hysteresis_recovery = hysteresis_recovery(p, probe);
    o.cumulative_amplification = cumulative_amplification(p, probe);
    o.dependency_amplification = dependency_amplification(p, probe);
    o.building_rate = building_rate(p, probe);
    o.single_period_erosion = single_period_erosion(p, probe);
    o.time_to_half_recovery = time_to_half_recovery(p, probe);
    return o;
}

// Results are stored by configuration id, so the output does not depend on threads.
inline std::vector<ConfigOutcome> evaluate_grid(const GridSpec& g, const MetricProbeSpec& probe, unsigned threads = 1) {
    validate(g);
    validate(probe);
    const std::size_t n = grid_size(g);
    std::vector<ConfigOutcome> out(n);
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(1, n))));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t id = begin; id < end; ++id) out[id] = evaluate_config(grid_params(g, id), probe);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(n, t * chunk), end = std::min(n, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline std::vector<double> metric_column(const std::vector<ConfigOutcome>& outcomes, std::size_t metric) {
    std::vector<double> col(outcomes.size());
    for (std::size_t k = 0; k < outcomes.size(); ++k) col[k] = outcomes[k].values()[metric];
    return col;
}

using SweepSummary = std::array<stats::Summary, ConfigOutcome::count>;

inline SweepSummary summarize(const std::vector<ConfigOutcome>& outcomes) {
    if (outcomes.empty()) throw ModelError("cannot summarize an empty sweep");
    SweepSummary s;
    for (std::size_t m = 0; m < ConfigOutcome::count; ++m) s[m] = stats::summarize(metric_column(outcomes, m));
    return s;
}

struct SensitivityMatrix {
    std::array<std::array<stats::Correlation, ConfigOutcome::count>, GridSpec::dims> cells{};

    const stats::Correlation& at(std::string_view parameter, std::string_view metric) const {
        for (std::size_t p = 0; p < GridSpec::dims; ++p)
            for (std::size_t m = 0; m < ConfigOutcome::count; ++m)
                if (GridSpec::names[p] == parameter && ConfigOutcome::names[m] == metric) return cells[p][m];
        throw ModelError("unknown sensitivity cell " + std::string(parameter) + "/" + std::string(metric));
    }
};

inline SensitivityMatrix sensitivity(const std::vector<ConfigOutcome>& outcomes, const GridSpec& g) {
    if (outcomes.size() != grid_size(g)) throw ModelError("outcome count does not match grid size");
    std::array<std::vector<double>, GridSpec::dims> params;
    for (auto& col : params) col.resize(outcomes.size());
    for (std::size_t id = 0; id < outcomes.size(); ++id) {
        const auto x = grid_point(g, id);
        for (std::size_t d = 0; d < GridSpec::dims; ++d) params[d][id] = x[d];
    }
    SensitivityMatrix s;
    for (std::size_t m = 0; m < ConfigOutcome::count; ++m) {
        const auto col = metric_column(outcomes, m);
        for (std::size_t d = 0; d < GridSpec::dims; ++d) s.cells[d][m] = stats::pearson(params[d], col);
    }
    return s;
}

struct ParetoMember {
    std::size_t id = 0;
    double negativity_deviation = 0.0;
    double hysteresis_recovery = 0.0;
    double cumulative_amplification = 0.0;
};

inline constexpr double pareto_target_negativity = 3.0;

namespace detail {

// Objectives snapped to a 1e-12 lattice so values equal up to rounding tie.
inline double snap(double x) { return std::round(x * 1e12) / 1e12; }

using ObjectiveKey = std::array<double, 3>;  // all minimized

inline ObjectiveKey pareto_key(const ConfigOutcome& o) {
    return {snap(std::abs(o.negativity_ratio - pareto_target_negativity)), -snap(o.hysteresis_recovery),
            snap(o.cumulative_amplification)};
}

inline bool dominates(const ObjectiveKey& a, const ObjectiveKey& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strict = true;
    }
    return strict;
}

} // namespace detail

// Non-dominated configurations among those with cumulative amplification > 1
// (all configurations if none qualifies). Sorting makes every dominator
// precede the points it dominates.
inline std::vector<ParetoMember> pareto_frontier(const std::vector<ConfigOutcome>& outcomes) {
    if (outcomes.empty()) throw ModelError("pareto frontier of empty input");
    const bool any_feasible = std::any_of(outcomes.begin(), outcomes.end(),
                                          [](const ConfigOutcome& o) { return o.cumulative_amplification > 1.0; });
    std::vector<std::pair<detail::ObjectiveKey, std::size_t>> order;
    for (std::size_t id = 0; id < outcomes.size(); ++id)
        if (!any_feasible || outcomes[id].cumulative_amplification > 1.0)
            order.emplace_back(detail::pareto_key(outcomes[id]), id);
    std::sort(order.begin(), order.end());

    std::vector<detail::ObjectiveKey> kept;
    std::vector<std::size_t> members;
    bool last_kept = false;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& key = order[k].first;
        if (k == 0 || key != order[k - 1].first) {
            last_kept = std::none_of(kept.begin(), kept.end(), [&](const auto& f) { return detail::dominates(f, key); });
            if (last_kept) kept.push_back(key);
        }
        if (last_kept) members.push_back(order[k].second);
    }
    std::sort(members.begin(), members.end());
    std::vector<ParetoMember> out;
    out.reserve(members.size());
    for (std::size_t id : members) {
        const auto& o = outcomes[id];
        out.push_back({id, std::abs(o.negativity_ratio - pareto_target_negativity), o.hysteresis_recovery,
                       o.cumulative_amplification});
    }
    return out;
}

} // namespace coop
