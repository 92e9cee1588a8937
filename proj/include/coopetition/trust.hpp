#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coopetition/error.hpp"
#include "coopetition/interdependence.hpp"

namespace coop {

// Plain field bundle; validated when wrapped in TrustParams.
struct TrustValues {
    double lambda_plus = 0.10;
    double lambda_minus = 0.30;
    double mu_R = 0.60;
    double delta_R = 0.02;
    double xi = 0.50;
    double rho = 0.20;
    double kappa_trust = 1.0;
    double discount = 0.95;

    friend bool operator==(const TrustValues&, const TrustValues&) = default;
};

class TrustParams {
public:
    TrustParams() : TrustParams(TrustValues{}) {}

    explicit TrustParams(const TrustValues& v) : v_(v) {
        auto open_unit = [](double x, const char* name) {
            if (!std::isfinite(x) || x <= 0.0 || x >= 1.0)
                throw ModelError(std::string(name) + " must lie in (0,1), got " + std::to_string(x));
        };
        open_unit(v.lambda_plus, "lambda_plus");
        open_unit(v.lambda_minus, "lambda_minus");
        open_unit(v.mu_R, "mu_R");
        open_unit(v.delta_R, "delta_R");
        if (!std::isfinite(v.xi) || v.xi < 0.0 || v.xi > 1.0)
            throw ModelError("xi must lie in [0,1], got " + std::to_string(v.xi));
        if (!std::isfinite(v.rho) || v.rho < 0.0)
            throw ModelError("rho must be nonnegative, got " + std::to_string(v.rho));
        if (!std::isfinite(v.kappa_trust) || v.kappa_trust <= 0.0)
            throw ModelError("kappa_trust must be positive, got " + std::to_string(v.kappa_trust));
        if (!std::isfinite(v.discount) || v.discount < 0.0 || v.discount >= 1.0)
            throw ModelError("discount must lie in [0,1), got " + std::to_string(v.discount));
        if (v.lambda_minus * (1.0 + v.xi) > 1.0)
            throw ModelError("lambda_minus*(1+xi) must not exceed 1");
    }

    double lambda_plus() const noexcept { return v_.lambda_plus; }
    double lambda_minus() const noexcept { return v_.lambda_minus; }
    double mu_R() const noexcept { return v_.mu_R; }
    double delta_R() const noexcept { return v_.delta_R; }
    double xi() const noexcept { return v_.xi; }
    double rho() const noexcept { return v_.rho; }
    double kappa_trust() const noexcept { return v_.kappa_trust; }
    double discount() const noexcept { return v_.discount; }
    const TrustValues& values() const noexcept { return v_; }

    friend bool operator==(const TrustParams&, const TrustParams&) = default;

private:
    TrustValues v_;
};

class CooperationSignal {
public:
    constexpr CooperationSignal() = default;
    explicit CooperationSignal(double value) : value_(value) {
        if (!std::isfinite(value) || !(std::abs(value) < 1.0))
            throw ModelError("cooperation signal must lie in (-1,1)");
    }
    double value() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

struct DyadState {
    double trust = 0.5;
    double reputation_damage = 0.0;

    friend bool operator==(const DyadState&, const DyadState&) = default;
};

inline void validate(const DyadState& s) {
    if (!(s.trust >= 0.0 && s.trust <= 1.0)) throw ModelError("trust outside [0,1]");
    if (!(s.reputation_damage >= 0.0 && s.reputation_damage <= 1.0))
        throw ModelError("reputation damage outside [0,1]");
}

inline constexpr double rounding_tolerance = 1e-12;

namespace detail {

// Absorbs floating rounding at the unit-interval edges; anything larger is a model error.
inline double settle_unit(double x) {
    assert(x > -rounding_tolerance && x < 1.0 + rounding_tolerance);
    return std::clamp(x, 0.0, 1.0);
}

inline void require_unit(double x, const char* name) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
        throw ModelError(std::string(name) + " must lie in [0,1], got " + std::to_string(x));
}

} // namespace detail

// tanh saturates to exactly +-1 in double precision for large arguments; the
// result is pulled back inside the open interval.
inline CooperationSignal signal_from_deviation(double deviation, double kappa) {
    if (!std::isfinite(deviation) || !std::isfinite(kappa))
        throw ModelError("non-finite signal input");
    if (kappa <= 0.0) throw ModelError("kappa must be positive");
    constexpr double edge = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    double s = std::tanh(kappa * deviation);
    return CooperationSignal(std::clamp(s, -edge, edge));
}

inline CooperationSignal cooperation_signal(double action, double baseline, double kappa) {
    if (!std::isfinite(action) || !std::isfinite(baseline)) throw ModelError("non-finite signal input");
    if (action < 0.0) throw ModelError("action must be nonnegative");
    return signal_from_deviation(action - baseline, kappa);
}

inline double trust_delta(const DyadState& state, CooperationSignal signal, double D_ij,
                          const TrustParams& params) {
    validate(state);
    detail::require_unit(D_ij, "D_ij");
    const double s = signal.value();
    if (s > 0.0)
        return params.lambda_plus() * s * (1.0 - state.trust) * (1.0 - state.reputation_damage);
    return params.lambda_minus() * s * state.trust * (1.0 + params.xi() * D_ij);
}

inline double reputation_step(const DyadState& state, CooperationSignal signal, const TrustParams& params) {
    validate(state);
    const double s = signal.value();
    const double R = state.reputation_damage;
    const double damage = s < 0.0 ? params.mu_R() * (-s) * (1.0 - R) : 0.0;
    return detail::settle_unit(R + damage - params.delta_R() * R);
}

inline DyadState dyad_step(const DyadState& state, CooperationSignal signal, double D_ij,
                           const TrustParams& params) {
    const double dT = trust_delta(state, signal, D_ij, params);
    return DyadState{detail::settle_unit(state.trust + dT), reputation_step(state, signal, params)};
}

inline DyadState dyad_step(const DyadState& state, double partner_action, double baseline, double D_ij,
                           const TrustParams& params) {
    return dyad_step(state, cooperation_signal(partner_action, baseline, params.kappa_trust()), D_ij, params);
}

// Ordered-pair dyads for n actors, stored densely without the diagonal.
class SystemState {
public:
    SystemState() = default;
    SystemState(std::size_t n, DyadState initial, std::size_t period = 0)
        : n_(n), period_(period), dyads_(n < 2 ? 0 : n * (n - 1), initial) {
        if (n < 2) throw ModelError("system state needs at least two actors");
        validate(initial);
    }

    std::size_t actors() const noexcept { return n_; }
    std::size_t period() const noexcept { return period_; }
    std::size_t dyad_count() const noexcept { return dyads_.size(); }

    const DyadState& at(std::size_t i, std::size_t j) const { return dyads_[index(i, j)]; }

    void set(std::size_t i, std::size_t j, DyadState s) {
        validate(s);
        dyads_[index(i, j)] = s;
    }

    // Dyads in lexicographic (i,j) order.
    const std::vector<DyadState>& dyads() const noexcept { return dyads_; }

    std::pair<std::size_t, std::size_t> pair_of(std::size_t k) const {
        if (k >= dyads_.size()) throw ModelError("dyad index out of range");
        std::size_t i = k / (n_ - 1);
        std::size_t j = k % (n_ - 1);
        return {i, j >= i ? j + 1 : j};
    }

    std::size_t index(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_ || i == j) throw ModelError("invalid dyad (" + std::to_string(i) + "," + std::to_string(j) + ")");
        return i * (n_ - 1) + (j < i ? j : j - 1);
    }

    void advance() noexcept { ++period_; }

    friend bool operator==(const SystemState&, const SystemState&) = default;

private:
    std::size_t n_ = 0;
    std::size_t period_ = 0;
    std::vector<DyadState> dyads_;
};

// Dyad (i,j) observes actor j's deviation from baseline and uses D_ij of the observer.
inline SystemState system_step_deviations(const SystemState& state, std::span<const double> deviations,
                                          const InterdependenceMatrix& D, const TrustParams& params) {
    const std::size_t n = state.actors();
    if (deviations.size() != n) throw ModelError("deviation count does not match actor count");
    if (D.size() != n) throw ModelError("interdependence matrix dimension does not match actor count");
    std::vector<CooperationSignal> signals;
    signals.reserve(n);
    for (double d : deviations) signals.push_back(signal_from_deviation(d, params.kappa_trust()));
    SystemState next = state;
    for (std::size_t k = 0; k < state.dyad_count(); ++k) {
        auto [i, j] = state.pair_of(k);
        next.set(i, j, dyad_step(state.at(i, j), signals[j], D(i, j), params));
    }
    next.advance();
    return next;
}

inline SystemState system_step(const SystemState& state, std::span<const double> actions,
                               std::span<const double> baselines, const InterdependenceMatrix& D,
                               const TrustParams& params) {
    if (actions.size() != state.actors() || baselines.size() != state.actors())
        throw ModelError("action/baseline count does not match actor count");
    std::vector<double> deviations(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (!std::isfinite(actions[i]) || actions[i] < 0.0) throw ModelError("action must be nonnegative");
        deviations[i] = actions[i] - baselines[i];
    }
    return system_step_deviations(state, deviations, D, params);
}

} // namespace coop
