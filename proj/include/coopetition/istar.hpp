#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "coopetition/error.hpp"
#include "coopetition/interdependence.hpp"

namespace coop {

struct Actor {
    std::string id;
    std::string name;

    friend bool operator==(const Actor&, const Actor&) = default;
};

enum class DependumKind { resource, goal, softgoal, task };

inline std::string_view to_string(DependumKind k) {
    switch (k) {
    case DependumKind::resource: return "resource";
    case DependumKind::goal: return "goal";
    case DependumKind::softgoal: return "softgoal";
    case DependumKind::task: return "task";
    }
    return "?";
}

inline std::optional<DependumKind> parse_dependum_kind(std::string_view s) {
    if (s == "resource") return DependumKind::resource;
    if (s == "goal") return DependumKind::goal;
    if (s == "softgoal") return DependumKind::softgoal;
    if (s == "task") return DependumKind::task;
    return std::nullopt;
}

struct Dependum {
    std::string depender;
    std::string dependee;
    std::string label;
    DependumKind kind = DependumKind::resource;
    double weight = 1.0;
    double criticality = 0.0;

    friend bool operator==(const Dependum&, const Dependum&) = default;
};

class DependencyNetwork {
public:
    DependencyNetwork() = default;

    DependencyNetwork(std::vector<Actor> actors, std::vector<Dependum> dependums)
        : actors_(std::move(actors)), dependums_(std::move(dependums)) {
        std::unordered_set<std::string> ids;
        for (const auto& a : actors_) {
            if (a.id.empty()) throw ModelError("actor id must not be empty");
            if (!ids.insert(a.id).second) throw ModelError("duplicate actor id '" + a.id + "'");
        }
        for (const auto& d : dependums_) {
            if (!ids.contains(d.depender)) throw ModelError("dependum references unknown actor '" + d.depender + "'");
            if (!ids.contains(d.dependee)) throw ModelError("dependum references unknown actor '" + d.dependee + "'");
            if (d.depender == d.dependee) throw ModelError("dependum '" + d.label + "' has depender == dependee");
            if (!std::isfinite(d.weight) || d.weight <= 0.0)
                throw ModelError("dependum '" + d.label + "' weight must be positive");
            if (!std::isfinite(d.criticality) || d.criticality < 0.0 || d.criticality > 1.0)
                throw ModelError("dependum '" + d.label + "' criticality must lie in [0,1]");
        }
    }

    const std::vector<Actor>& actors() const noexcept { return actors_; }
    const std::vector<Dependum>& dependums() const noexcept { return dependums_; }

    std::size_t index_of(std::string_view id) const {
        for (std::size_t i = 0; i < actors_.size(); ++i)
            if (actors_[i].id == id) return i;
        throw ModelError("unknown actor id '" + std::string(id) + "'");
    }

    friend bool operator==(const DependencyNetwork&, const DependencyNetwork&) = default;

private:
    std::vector<Actor> actors_;
    std::vector<Dependum> dependums_;
};

// Weighted criticality of depender's dependums on dependee, normalized by the
// weight of everything the depender depends on.
inline double compute_interdependence(const DependencyNetwork& network, std::string_view depender,
                                      std::string_view dependee) {
    network.index_of(depender);
    network.index_of(dependee);
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& d : network.dependums()) {
        if (d.depender != depender) continue;
        denominator += d.weight;
        if (d.dependee == dependee) numerator += d.weight * d.criticality;
    }
    if (denominator == 0.0) return 0.0;
    return std::clamp(numerator / denominator, 0.0, 1.0);
}

inline InterdependenceMatrix build_matrix(const DependencyNetwork& network) {
    const auto& actors = network.actors();
    InterdependenceMatrix m(actors.size());
    for (std::size_t i = 0; i < actors.size(); ++i)
        for (std::size_t j = 0; j < actors.size(); ++j)
            if (i != j) m.set(i, j, compute_interdependence(network, actors[i].id, actors[j].id));
    return m;
}

enum class RubricParameter { lambda_plus, lambda_minus, mu_R, delta_R, xi, rho, kappa_trust };

inline std::optional<RubricParameter> parse_rubric_parameter(std::string_view s) {
    if (s == "lambda_plus") return RubricParameter::lambda_plus;
    if (s == "lambda_minus") return RubricParameter::lambda_minus;
    if (s == "mu_R") return RubricParameter::mu_R;
    if (s == "delta_R") return RubricParameter::delta_R;
    if (s == "xi") return RubricParameter::xi;
    if (s == "rho") return RubricParameter::rho;
    if (s == "kappa_trust") return RubricParameter::kappa_trust;
    return std::nullopt;
}

struct RubricAssessment {
    RubricParameter parameter;
    int score;
};

struct RubricAnchor {
    double range_min;
    int anchor_score;
    double anchor_value;
    double range_max;
};

inline RubricAnchor rubric_anchor(RubricParameter p) {
    switch (p) {
    case RubricParameter::lambda_plus: return {0.05, 4, 0.10, 0.15};
    case RubricParameter::lambda_minus: return {0.15, 5, 0.30, 0.45};
    case RubricParameter::mu_R: return {0.50, 5, 0.60, 0.70};
    case RubricParameter::delta_R: return {0.01, 2, 0.02, 0.05};
    case RubricParameter::xi: return {0.30, 4, 0.50, 0.70};
    case RubricParameter::rho: return {0.10, 3, 0.20, 0.30};
    case RubricParameter::kappa_trust: return {0.50, 4, 1.00, 1.50};
    }
    throw ModelError("unknown rubric parameter");
}

// Piecewise-linear: score 1 -> range min, anchor score -> anchor value, 7 -> range max.
inline double rubric_to_value(const RubricAssessment& a) {
    if (a.score < 1 || a.score > 7) throw ModelError("rubric score must lie in 1..7, got " + std::to_string(a.score));
    const RubricAnchor r = rubric_anchor(a.parameter);
    if (a.score == r.anchor_score) return r.anchor_value;
    if (a.score < r.anchor_score)
        return r.range_min + (r.anchor_value - r.range_min) * (a.score - 1) / double(r.anchor_score - 1);
    return r.anchor_value + (r.range_max - r.anchor_value) * (a.score - r.anchor_score) / double(7 - r.anchor_score);
}

} // namespace coop
