#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "coopetition/error.hpp"
#include "coopetition/scenario.hpp"
#include "coopetition/stats.hpp"

namespace coop {

enum class ExpectedDirection { cooperative, violation };

struct PhaseAnnotation {
    std::string name;
    std::size_t first_period = 0;
    std::size_t last_period = 0;  // inclusive
    ExpectedDirection expected = ExpectedDirection::cooperative;
    std::optional<std::vector<double>> observed_trust;  // one value per period of the phase
    std::optional<double> reference_trust;              // documented phase-mean trust

    std::size_t length() const noexcept { return last_period - first_period + 1; }
};

// Consecutive phase ranges; direction from the sign of the mean deviation.
inline std::vector<PhaseAnnotation> annotations_from_scenario(const Scenario& s) {
    std::vector<PhaseAnnotation> out;
    std::size_t start = 0;
    for (const auto& p : s.phases) {
        double mean_dev = 0.0;
        for (double d : p.deviation) mean_dev += d;
        PhaseAnnotation a;
        a.name = p.name;
        a.first_period = start;
        a.last_period = start + std::size_t(p.duration) - 1;
        a.expected = mean_dev < 0.0 ? ExpectedDirection::violation : ExpectedDirection::cooperative;
        a.reference_trust = p.reference_trust;
        out.push_back(std::move(a));
        start += std::size_t(p.duration);
    }
    return out;
}

inline void validate_annotations(const Trajectory& traj, const std::vector<PhaseAnnotation>& ann) {
    if (ann.empty()) throw ModelError("annotation set is empty");
    std::size_t next = 0;
    for (const auto& a : ann) {
        if (a.first_period != next || a.last_period < a.first_period)
            throw ModelError("annotation '" + a.name + "' does not continue the partition");
        if (a.observed_trust && a.observed_trust->size() != a.length())
            throw ModelError("annotation '" + a.name + "' observed series length does not match its range");
        next = a.last_period + 1;
    }
    if (next != traj.size()) throw ModelError("annotations do not cover the trajectory");
}

struct CheckDetail {
    std::string name;
    int points = 0;
    int max_points = 0;
    std::string evidence;
};

struct DimensionScore {
    int score = 0;
    std::vector<CheckDetail> checks;
};

namespace detail {

inline std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

inline std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

inline DimensionScore finish(std::vector<CheckDetail> checks) {
    DimensionScore d;
    for (const auto& c : checks) d.score += c.points;
    d.score = std::clamp(d.score, 0, 15);
    d.checks = std::move(checks);
    return d;
}

inline bool within_bounds(const Trajectory& traj) {
    for (const auto& r : traj.records)
        for (const auto& d : r.dyads)
            if (!(d.trust >= 0.0 && d.trust <= 1.0 && d.reputation_damage >= 0.0 && d.reputation_damage <= 1.0))
                return false;
    return true;
}

inline double mean_over(const std::vector<double>& y, std::size_t first, std::size_t last) {
    double s = 0.0;
    for (std::size_t k = first; k <= last; ++k) s += y[k];
    return s / double(last - first + 1);
}

inline int tier(double value, double t5, double t3, double t1, bool higher_is_better) {
    auto ok = [&](double t) { return higher_is_better ? value >= t : value <= t; };
    return ok(t5) ? 5 : ok(t3) ? 3 : ok(t1) ? 1 : 0;
}

inline const PhaseAnnotation* phase_at(const std::vector<PhaseAnnotation>& ann, std::size_t k) {
    for (const auto& a : ann)
        if (k >= a.first_period && k <= a.last_period) return &a;
    return nullptr;
}

inline double mean_signal(const PeriodRecord& r) {
    double s = 0.0;
    for (double x : r.signals) s += x;
    return r.signals.empty() ? 0.0 : s / double(r.signals.size());
}

} // namespace detail

// Observed series: RMSE, MAE and R^2 tiers. Without one: bounds, a
// build/collapse/partial-recovery shape test and phase-level reference bands.
inline DimensionScore score_alignment(const Trajectory& traj, const std::vector<PhaseAnnotation>& ann) {
    validate_annotations(traj, ann);
    const auto y = traj.mean_trust_series();
    const bool observed = std::any_of(ann.begin(), ann.end(), [](const auto& a) { return a.observed_trust.has_value(); });
    std::vector<CheckDetail> checks;
    if (observed) {
        std::vector<double> sim, obs;
        for (const auto& a : ann) {
            if (!a.observed_trust) continue;
            for (std::size_t k = 0; k < a.length(); ++k) {
                sim.push_back(y[a.first_period + k]);
                obs.push_back((*a.observed_trust)[k]);
            }
        }
        double sse = 0.0, sae = 0.0;
        for (std::size_t k = 0; k < sim.size(); ++k) {
            sse += (sim[k] - obs[k]) * (sim[k] - obs[k]);
            sae += std::abs(sim[k] - obs[k]);
        }
        const double m = stats::mean(obs);
        double sst = 0.0;
        for (double o : obs) sst += (o - m) * (o - m);
        const double rmse = std::sqrt(sse / double(sim.size()));
        const double mae = sae / double(sim.size());
        const double r2 = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
        checks.push_back({"rmse", detail::tier(rmse, 0.05, 0.10, 0.20, false), 5, detail::fmt("RMSE %.4f", rmse)});
        checks.push_back({"mae", detail::tier(mae, 0.05, 0.10, 0.20, false), 5, detail::fmt("MAE %.4f", mae)});
        checks.push_back({"r_squared", detail::tier(r2, 0.90, 0.75, 0.50, true), 5, detail::fmt("R^2 %.4f", r2)});
        return detail::finish(std::move(checks));
    }

    if (!detail::within_bounds(traj)) {
        checks.push_back({"bounds", 0, 5, "trust or reputation left [0,1]; alignment implausible"});
        checks.push_back({"shape", 0, 5, "not assessed"});
        checks.push_back({"bands", 0, 5, "not assessed"});
        return detail::finish(std::move(checks));
    }
    checks.push_back({"bounds", 5, 5, "all trust and reputation values within [0,1]"});

    // changepoint = largest single-period drop in dyad-mean trust
    std::size_t cp = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double d = traj.mean_trust_change(k);
        if (d < worst) {
            worst = d;
            cp = k;
        }
    }
    bool shape = false;
    std::string evidence = "no trust decline found";
    if (worst < 0.0) {
        const auto* phase = detail::phase_at(ann, cp);
        const bool in_violation = phase && phase->expected == ExpectedDirection::violation;
        const double before_peak = cp == 0 ? traj.mean_initial_trust() : *std::max_element(y.begin(), y.begin() + cp);
        const double trough = *std::min_element(y.begin() + cp, y.end());
        const bool built = before_peak > traj.mean_initial_trust();
        const bool partial = y.back() > trough && y.back() < before_peak;
        shape = in_violation && built && partial;
        evidence = "largest drop at period " + std::to_string(cp) + (in_violation ? " (violation phase)" : " (not a violation phase)") +
                   detail::fmt("; pre-drop peak %.3f", before_peak) + detail::fmt(", trough %.3f, final %.3f", trough, y.back());
    }
    checks.push_back({"shape", shape ? 5 : 0, 5, evidence});

    bool bands = true;
    std::string band_evidence;
    for (const auto& a : ann) {
        const double m = detail::mean_over(y, a.first_period, a.last_period);
        if (!a.reference_trust) {
            bands = false;
            band_evidence += a.name + ": no reference; ";
            continue;
        }
        const bool ok = std::abs(m - *a.reference_trust) <= 0.05;
        bands = bands && ok;
        band_evidence += a.name + detail::fmt(" mean %.3f vs %.3f", m, *a.reference_trust) + (ok ? " ok; " : " off; ");
    }
    checks.push_back({"bands", bands ? 5 : 0, 5, band_evidence});
    return detail::finish(std::move(checks));
}

inline DimensionScore score_behavioral(const Trajectory& traj, const std::vector<PhaseAnnotation>& ann) {
    validate_annotations(traj, ann);
    std::vector<CheckDetail> checks;
    for (const auto& a : ann) {
        double change = 0.0;
        for (std::size_t k = a.first_period; k <= a.last_period; ++k) change += traj.mean_trust_change(k);
        change /= double(a.length());
        const bool ok = a.expected == ExpectedDirection::cooperative ? change > 0.0 : change < 0.0;
        checks.push_back({"direction:" + a.name, ok ? 3 : 0, 3,
                          detail::fmt("mean per-period change %+.5f", change) +
                              (a.expected == ExpectedDirection::cooperative ? " (expected rise)" : " (expected fall)")});
    }
    return detail::finish(std::move(checks));
}

// Violation periods are those with a negative mean signal. Speeds are
// normalized by signal strength and remaining room, so the ratio reflects the
// rates themselves rather than where the trajectory happens to sit.
inline DimensionScore score_mechanism(const Trajectory& traj) {
    std::vector<CheckDetail> checks;
    std::vector<std::size_t> violations;
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (detail::mean_signal(traj.records[k]) < 0.0) violations.push_back(k);
    auto before = [&](std::size_t k) -> const std::vector<DyadState>& {
        return k == 0 ? traj.initial.dyads() : traj.records[k - 1].dyads;
    };

    // first cooperative phase: first phase label whose periods all carry positive signals
    std::size_t coop_begin = traj.size(), coop_end = traj.size();
    for (std::size_t k = 0; k < traj.size();) {
        std::size_t e = k;
        while (e < traj.size() && traj.records[e].phase == traj.records[k].phase) ++e;
        bool positive = true;
        for (std::size_t q = k; q < e; ++q) positive = positive && detail::mean_signal(traj.records[q]) > 0.0;
        if (positive) {
            coop_begin = k;
            coop_end = e;
            break;
        }
        k = e;
    }

    double erosion = 0.0;
    for (std::size_t k : violations)
        for (std::size_t d = 0; d < traj.records[k].dyads.size(); ++d) {
            const double s = traj.records[k].signals[d], T = before(k)[d].trust;
            if (s < 0.0 && T > 0.0)
                erosion = std::max(erosion, std::abs(traj.records[k].dyads[d].trust - T) / (std::abs(s) * T));
        }
    double building = 0.0;
    std::size_t samples = 0;
    for (std::size_t k = coop_begin; k < coop_end; ++k)
        for (std::size_t d = 0; d < traj.records[k].dyads.size(); ++d) {
            const double s = traj.records[k].signals[d], T = before(k)[d].trust;
            if (s > 0.0 && T < 1.0) {
                building += (traj.records[k].dyads[d].trust - T) / (s * (1.0 - T));
                ++samples;
            }
        }
    if (violations.empty() || samples == 0 || !(building > 0.0)) {
        checks.push_back({"asymmetry", 0, 5, "needs both a violation and a cooperative phase"});
    } else {
        building /= double(samples);
        const double ratio = erosion / building;
        checks.push_back({"asymmetry", ratio >= 1.5 ? 5 : 0, 5,
                          detail::fmt("erosion/building speed ratio %.3f", ratio) + " (threshold 1.5)"});
    }

    if (violations.empty() || violations.back() + 1 >= traj.size()) {
        checks.push_back({"hysteresis", 0, 5, "no violation followed by recovery periods"});
    } else {
        const std::size_t first = violations.front();
        const double pre = first == 0 ? traj.mean_initial_trust() : traj.mean_trust(first - 1);
        double post = 0.0;
        for (std::size_t k = violations.back() + 1; k < traj.size(); ++k) post = std::max(post, traj.mean_trust(k));
        checks.push_back({"hysteresis", post < 0.9 * pre ? 5 : 0, 5,
                          detail::fmt("post-crisis max trust %.3f vs pre-crisis %.3f", post, pre)});
    }

    double peak_R = 0.0;
    for (const auto& r : traj.records)
        for (const auto& d : r.dyads) peak_R = std::max(peak_R, d.reputation_damage);
    if (violations.empty()) {
        checks.push_back({"reputation", 0, 5, "no violation present"});
    } else {
        checks.push_back({"reputation", peak_R > 0.3 ? 5 : 0, 5, detail::fmt("peak reputation damage %.3f", peak_R) + " (threshold 0.3)"});
    }
    return detail::finish(std::move(checks));
}

inline DimensionScore score_outcome(const Trajectory& traj, const std::vector<PhaseAnnotation>& ann) {
    validate_annotations(traj, ann);
    const auto y = traj.mean_trust_series();
    std::vector<CheckDetail> checks;
    const double final_T = y.back();
    const bool in_range = final_T >= 0.2 && final_T <= 0.8;
    checks.push_back({"final_level", in_range ? 7 : 4, 7, detail::fmt("final trust %.3f", final_T) + " (range 0.2-0.8)"});
    for (std::size_t p = 1; p < ann.size(); ++p) {
        const std::size_t b = ann[p].first_period;
        std::string name = "transition:" + ann[p - 1].name + "->" + ann[p].name;
        if (b < 2 || b + 1 >= y.size()) {
            checks.push_back({name, 0, 2, "window does not fit"});
            continue;
        }
        const double before = 0.5 * (y[b - 2] + y[b - 1]);
        const double after = 0.5 * (y[b] + y[b + 1]);
        const double jump = std::abs(after - before);
        checks.push_back({name, jump > 0.05 ? 2 : 0, 2, detail::fmt("|change| %.3f", jump) + " (threshold 0.05)"});
    }
    return detail::finish(std::move(checks));
}

struct PhaseRegression {
    std::string phase;
    stats::RegressionResult fit;
};

inline stats::RegressionResult phase_trend_regression(const Trajectory& traj, const PhaseAnnotation& phase) {
    if (phase.last_period >= traj.size() || phase.last_period < phase.first_period)
        throw ModelError("phase range outside the trajectory");
    std::vector<double> x, y;
    for (std::size_t k = phase.first_period; k <= phase.last_period; ++k) {
        x.push_back(double(k));
        y.push_back(traj.mean_trust(k));
    }
    return stats::linear_regression(x, y);
}

struct ValidationReport {
    DimensionScore alignment, behavioral, mechanism, outcome;
    int total = 0;
    stats::AnovaResult anova;
    std::vector<PhaseRegression> regressions;
};

inline ValidationReport validate(const Trajectory& traj, const std::vector<PhaseAnnotation>& ann) {
    validate_annotations(traj, ann);
    ValidationReport r;
    r.alignment = score_alignment(traj, ann);
    r.behavioral = score_behavioral(traj, ann);
    r.mechanism = score_mechanism(traj);
    r.outcome = score_outcome(traj, ann);
    r.total = r.alignment.score + r.behavioral.score + r.mechanism.score + r.outcome.score;
    const auto y = traj.mean_trust_series();
    if (ann.size() >= 2 && traj.size() > ann.size()) {
        std::vector<std::vector<double>> groups;
        for (const auto& a : ann) groups.emplace_back(y.begin() + long(a.first_period), y.begin() + long(a.last_period) + 1);
        r.anova = stats::anova_oneway(groups);
    } else {
        r.anova.status = stats::AnovaStatus::degenerate;
        r.anova.F = r.anova.p = std::nan("");
    }
    for (const auto& a : ann)
        if (a.length() >= 3) r.regressions.push_back({a.name, phase_trend_regression(traj, a)});
    return r;
}

} // namespace coop
