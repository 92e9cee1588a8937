#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coopetition/error.hpp"
#include "coopetition/interdependence.hpp"
#include "coopetition/trust.hpp"

namespace coop {

enum class ValueVariant { power, logarithmic };
enum class ReciprocityForm { raw, bounded };

struct EconomyParams {
    std::size_t n = 2;
    ValueVariant variant = ValueVariant::power;
    double beta_exponent = 0.75;
    double theta = 1.0;
    double gamma = 1.0;
    std::vector<double> shares;
    std::vector<double> endowments;
    std::vector<double> baselines;
    ReciprocityForm reciprocity = ReciprocityForm::raw;

    friend bool operator==(const EconomyParams&, const EconomyParams&) = default;
};

// Equal shares, zero endowments, unit baselines.
inline EconomyParams default_economy(std::size_t n) {
    EconomyParams e;
    e.n = n;
    e.shares.assign(n, 1.0 / double(n));
    e.endowments.assign(n, 0.0);
    e.baselines.assign(n, 1.0);
    return e;
}

inline void validate(const EconomyParams& e) {
    if (e.n < 1) throw ModelError("economy needs at least one actor");
    if (e.shares.size() != e.n || e.endowments.size() != e.n || e.baselines.size() != e.n)
        throw ModelError("economy per-actor vectors must have length n");
    if (!(e.beta_exponent > 0.0 && e.beta_exponent < 1.0)) throw ModelError("beta_exponent must lie in (0,1)");
    if (!(e.theta > 0.0) || !std::isfinite(e.theta)) throw ModelError("theta must be positive");
    if (!(e.gamma >= 0.0) || !std::isfinite(e.gamma)) throw ModelError("gamma must be nonnegative");
    double total = 0.0;
    for (double a : e.shares) {
        if (!(a >= 0.0 && a <= 1.0)) throw ModelError("shares must lie in [0,1]");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ModelError("shares must sum to 1");
    for (double x : e.endowments)
        if (!(x >= 0.0) || !std::isfinite(x)) throw ModelError("endowments must be nonnegative");
    for (double b : e.baselines)
        if (!std::isfinite(b)) throw ModelError("baselines must be finite");
}

namespace detail {

inline void check_profile(std::span<const double> actions, const EconomyParams& e) {
    if (actions.size() != e.n) throw ModelError("action profile length does not match n");
    for (double a : actions)
        if (!(a >= 0.0) || !std::isfinite(a)) throw ModelError("actions must be nonnegative and finite");
}

} // namespace detail

inline double individual_value(double a, const EconomyParams& e) {
    return e.variant == ValueVariant::power ? std::pow(a, e.beta_exponent) : e.theta * std::log1p(a);
}

inline double synergy(std::span<const double> actions) {
    double product = 1.0;
    for (double a : actions) product *= a;
    if (product == 0.0) return 0.0;
    return actions.size() == 2 ? std::sqrt(product) : std::pow(product, 1.0 / double(actions.size()));
}

inline double value_creation(std::span<const double> actions, const EconomyParams& e) {
    detail::check_profile(actions, e);
    double v = 0.0;
    for (double a : actions) v += individual_value(a, e);
    return v + e.gamma * synergy(actions);
}

inline double private_payoff(std::size_t i, std::span<const double> actions, const EconomyParams& e) {
    detail::check_profile(actions, e);
    if (i >= e.n) throw ModelError("actor index out of range");
    const double a = actions[i];
    return e.endowments[i] - a + individual_value(a, e) + e.shares[i] * e.gamma * synergy(actions);
}

inline double base_utility(std::size_t i, std::span<const double> actions, const InterdependenceMatrix& D,
                           const EconomyParams& e) {
    if (D.size() != e.n) throw ModelError("interdependence matrix dimension does not match n");
    double u = private_payoff(i, actions, e);
    for (std::size_t j = 0; j < e.n; ++j)
        if (j != i) u += D(i, j) * private_payoff(j, actions, e);
    return u;
}

inline double reciprocity_term(double deviation, const EconomyParams& e, const TrustParams& p) {
    return e.reciprocity == ReciprocityForm::raw ? deviation : std::tanh(p.kappa_trust() * deviation);
}

// trust_row[j] is actor i's trust in j; entry i is ignored.
inline double extended_utility(std::size_t i, std::span<const double> actions, std::span<const double> trust_row,
                               const InterdependenceMatrix& D, const EconomyParams& e, const TrustParams& p) {
    if (trust_row.size() != e.n) throw ModelError("trust row length does not match n");
    double u = base_utility(i, actions, D, e);
    for (std::size_t j = 0; j < e.n; ++j) {
        if (j == i) continue;
        if (!(trust_row[j] >= 0.0 && trust_row[j] <= 1.0)) throw ModelError("trust must lie in [0,1]");
        u += p.rho() * trust_row[j] * reciprocity_term(actions[j] - e.baselines[j], e, p) * actions[i];
    }
    return u;
}

inline std::string_view to_string(ValueVariant v) { return v == ValueVariant::power ? "power" : "logarithmic"; }
inline std::string_view to_string(ReciprocityForm r) { return r == ReciprocityForm::raw ? "raw" : "bounded"; }

} // namespace coop
