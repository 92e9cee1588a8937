#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "coopetition/error.hpp"
#include "coopetition/trust.hpp"

namespace coop {

// Standardized single-dyad probes. Deviations are read at reference_kappa, so
// a probe applies the same signal whatever the configuration's own kappa.
struct MetricProbeSpec {
    int build_periods = 30;
    double build_initial_trust = 0.0;
    double build_deviation = 0.45;
    int recovery_window = 35;
    double pre_violation_trust = 0.85;
    double initial_R = 0.0;
    double severe_deviation = -3.0;
    double moderate_deviation = -1.5;
    double cooperation_deviation = 1.0;
    int small_violation_count = 5;
    double small_violation_deviation = -0.6;
    int settle_periods = 2;
    int recovery_violation_periods = 2;
    int recovery_horizon = 200;
    double probe_dependency = 0.5;
    double D_high = 0.8;
    double D_low = 0.2;
    double reference_kappa = 1.0;

    friend bool operator==(const MetricProbeSpec&, const MetricProbeSpec&) = default;
};

inline void validate(const MetricProbeSpec& p) {
    auto unit = [](double x, const char* name) {
        if (!(x >= 0.0 && x <= 1.0)) throw ModelError(std::string("probe ") + name + " must lie in [0,1]");
    };
    if (p.build_periods < 1 || p.recovery_window < 1 || p.small_violation_count < 1 ||
        p.recovery_violation_periods < 1 || p.recovery_horizon < 1 || p.settle_periods < 0)
        throw ModelError("probe durations and counts must be positive");
    unit(p.build_initial_trust, "build_initial_trust");
    unit(p.pre_violation_trust, "pre_violation_trust");
    unit(p.initial_R, "initial_R");
    unit(p.probe_dependency, "probe_dependency");
    unit(p.D_high, "D_high");
    unit(p.D_low, "D_low");
    if (!(p.D_high > p.D_low)) throw ModelError("probe D_high must exceed D_low");
    if (!(p.severe_deviation <= 0.0 && p.moderate_deviation <= 0.0 && p.small_violation_deviation <= 0.0))
        throw ModelError("probe violation deviations must be nonpositive");
    if (!(p.cooperation_deviation > 0.0 && p.build_deviation > 0.0))
        throw ModelError("probe cooperation deviations must be positive");
    if (!(p.reference_kappa > 0.0)) throw ModelError("probe reference_kappa must be positive");
    if (!(p.pre_violation_trust > 0.0)) throw ModelError("probe pre_violation_trust must be positive");
}

struct ConfigOutcome {
    double negativity_ratio = 0.0;
    double hysteresis_recovery = 0.0;
    double cumulative_amplification = 0.0;
    double dependency_amplification = 0.0;
    double building_rate = 0.0;
    double single_period_erosion = 0.0;
    double time_to_half_recovery = 0.0;

    static constexpr std::size_t count = 7;
    static constexpr std::array<std::string_view, count> names{
        "negativity_ratio",      "hysteresis_recovery", "cumulative_amplification", "dependency_amplification",
        "building_rate",         "single_period_erosion", "time_to_half_recovery"};

    std::array<double, count> values() const {
        return {negativity_ratio,  hysteresis_recovery,    cumulative_amplification, dependency_amplification,
                building_rate,     single_period_erosion,  time_to_half_recovery};
    }

    friend bool operator==(const ConfigOutcome&, const ConfigOutcome&) = default;
};

namespace detail {

inline CooperationSignal probe_signal(double deviation, const MetricProbeSpec& probe) {
    return signal_from_deviation(deviation, probe.reference_kappa);
}

inline DyadState repeat_step(DyadState s, CooperationSignal sig, int periods, double D, const TrustParams& p) {
    for (int t = 0; t < periods; ++t) s = dyad_step(s, sig, D, p);
    return s;
}

inline DyadState pre_violation_state(const MetricProbeSpec& probe) {
    return {probe.pre_violation_trust, probe.initial_R};
}

} // namespace detail

inline double negativity_ratio(const TrustParams& p) { return p.lambda_minus() / p.lambda_plus(); }

inline double building_rate(const TrustParams& p, const MetricProbeSpec& probe) {
    const DyadState start{probe.build_initial_trust, probe.initial_R};
    const DyadState end = detail::repeat_step(start, detail::probe_signal(probe.build_deviation, probe),
                                              probe.build_periods, probe.probe_dependency, p);
    return (end.trust - start.trust) / double(probe.build_periods);
}

inline double single_period_erosion(const TrustParams& p, const MetricProbeSpec& probe) {
    const DyadState pre = detail::pre_violation_state(probe);
    return pre.trust - dyad_step(pre, detail::probe_signal(probe.moderate_deviation, probe), probe.probe_dependency, p).trust;
}

// Highest trust reached during the recovery window, relative to the pre-violation level.
inline double hysteresis_recovery(const TrustParams& p, const MetricProbeSpec& probe) {
    const DyadState pre = detail::pre_violation_state(probe);
    const double D = probe.probe_dependency;
    DyadState s = dyad_step(pre, detail::probe_signal(probe.severe_deviation, probe), D, p);
    const CooperationSignal coop = detail::probe_signal(probe.cooperation_deviation, probe);
    double peak = 0.0;
    for (int t = 0; t < probe.recovery_window; ++t) {
        s = dyad_step(s, coop, D, p);
        peak = std::max(peak, s.trust);
    }
    return peak / pre.trust;
}

inline double dependency_amplification(const TrustParams& p, const MetricProbeSpec& probe) {
    const DyadState pre = detail::pre_violation_state(probe);
    const CooperationSignal sig = detail::probe_signal(probe.severe_deviation, probe);
    const double loss_high = pre.trust - dyad_step(pre, sig, probe.D_high, p).trust;
    const double loss_low = pre.trust - dyad_step(pre, sig, probe.D_low, p).trust;
    if (!(loss_low > 0.0)) throw ModelError("degenerate probe: zero trust loss at D_low");
    return loss_high / loss_low;
}

// Many small violations against one violation of the same total deviation; the
// single arm idles at baseline so both arms end at the same time, then both
// cooperate for settle_periods before the deficits are compared.
inline double cumulative_amplification(const TrustParams& p, const MetricProbeSpec& probe) {
    const DyadState pre = detail::pre_violation_state(probe);
    const double D = probe.probe_dependency;
    const int count = probe.small_violation_count;
    const CooperationSignal coop = detail::probe_signal(probe.cooperation_deviation, probe);

    DyadState many = detail::repeat_step(pre, detail::probe_signal(probe.small_violation_deviation, probe), count, D, p);
    many = detail::repeat_step(many, coop, probe.settle_periods, D, p);

    DyadState one = dyad_step(pre, detail::probe_signal(count * probe.small_violation_deviation, probe), D, p);
    one = detail::repeat_step(one, CooperationSignal(0.0), count - 1, D, p);
    one = detail::repeat_step(one, coop, probe.settle_periods, D, p);

    const double loss_many = pre.trust - many.trust;
    const double loss_one = pre.trust - one.trust;
    if (!(loss_one > 0.0)) throw ModelError("degenerate probe: zero single-violation trust loss");
    return loss_many / loss_one;
}

// Cooperative periods needed to climb back to half the pre-violation trust;
// recovery_horizon + 1 if never reached.
inline double time_to_half_recovery(const TrustParams& p, const MetricProbeSpec& probe) {
    const DyadState pre = detail::pre_violation_state(probe);
    const double D = probe.probe_dependency;
    const double target = 0.5 * pre.trust;
    DyadState s = detail::repeat_step(pre, detail::probe_signal(probe.severe_deviation, probe),
                                      probe.recovery_violation_periods, D, p);
    if (s.trust >= target) return 0.0;
    const CooperationSignal coop = detail::probe_signal(probe.cooperation_deviation, probe);
    for (int k = 1; k <= probe.recovery_horizon; ++k) {
        s = dyad_step(s, coop, D, p);
        if (s.trust >= target) return double(k);
    }
    return double(probe.recovery_horizon + 1);
}

} // namespace coop
