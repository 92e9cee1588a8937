#include <cmath>

#include <gtest/gtest.h>

#include "coopetition/validation.hpp"

using namespace coop;

namespace {

Scenario synthetic(std::vector<PhaseSpec> phases, TrustValues v = {}) {
    Scenario s;
    s.name = "synthetic";
    s.actors = {{"a", "A"}, {"b", "B"}};
    s.initial = SystemState(2, {0.3, 0.0});
    s.econ = default_economy(2);
    s.D = InterdependenceMatrix::from_rows({{0, 0.5}, {0.5, 0}});
    s.trust_params = TrustParams(v);
    s.phases = std::move(phases);
    return s;
}

Scenario full_marks() {
    TrustValues v;
    v.lambda_plus = 0.15;
    v.delta_R = 0.2;
    return synthetic({{"rise", 12, {2.0, 2.0}, {}},
                      {"crisis", 2, {-3.0, -3.0}, {}},
                      {"recover", 10, {2.0, 2.0}, {}},
                      {"slip", 1, {-3.0, -3.0}, {}},
                      {"rebuild", 4, {2.0, 2.0}, {}}},
                     v);
}

std::vector<PhaseAnnotation> observed_equals_simulated(const Trajectory& t, std::vector<PhaseAnnotation> ann) {
    const auto y = t.mean_trust_series();
    for (auto& a : ann) a.observed_trust = std::vector<double>(y.begin() + long(a.first_period), y.begin() + long(a.last_period) + 1);
    return ann;
}

} // namespace

TEST(RenaultNissan, SubscoresAndTotal) {
    const auto s = renault_nissan_scenario();
    const auto t = simulate(s);
    const auto r = validate(t, annotations_from_scenario(s));
    EXPECT_EQ(r.alignment.score, 10);
    EXPECT_EQ(r.behavioral.score, 15);
    EXPECT_EQ(r.mechanism.score, 15);
    EXPECT_EQ(r.outcome.score, 9);
    EXPECT_EQ(r.total, 49);
    EXPECT_EQ(r.anova.df_between, 4);
    EXPECT_EQ(r.anova.df_within, 75);
    EXPECT_EQ(r.anova.status, stats::AnovaStatus::ok);
    EXPECT_LT(r.anova.p, 1e-10);
}

TEST(RenaultNissan, RecoveryTrendIsPositive) {
    const auto s = renault_nissan_scenario();
    const auto t = simulate(s);
    const auto ann = annotations_from_scenario(s);
    ASSERT_EQ(ann[3].name, "recovery");
    const auto fit = phase_trend_regression(t, ann[3]);
    EXPECT_GT(fit.slope, 0.0);
    EXPECT_LT(fit.p, 0.05);
}

TEST(Annotations, FromScenarioPartitionsThePeriods) {
    const auto ann = annotations_from_scenario(renault_nissan_scenario());
    ASSERT_EQ(ann.size(), 5u);
    EXPECT_EQ(ann[0].first_period, 0u);
    EXPECT_EQ(ann[0].last_period, 11u);
    EXPECT_EQ(ann[2].first_period, 52u);
    EXPECT_EQ(ann[2].last_period, 55u);
    EXPECT_EQ(ann[2].expected, ExpectedDirection::violation);
    EXPECT_EQ(ann[4].last_period, 79u);
    EXPECT_EQ(ann[1].reference_trust, 0.97);
}

TEST(Annotations, Rejected) {
    const auto s = renault_nissan_scenario();
    const auto t = simulate(s);
    EXPECT_THROW(validate(t, {}), ModelError);
    auto ann = annotations_from_scenario(s);
    ann.pop_back();
    EXPECT_THROW(validate(t, ann), ModelError);
    ann = annotations_from_scenario(s);
    ann[1].first_period = 13;
    EXPECT_THROW(validate(t, ann), ModelError);
    ann = annotations_from_scenario(s);
    ann[0].observed_trust = std::vector<double>{0.5};
    EXPECT_THROW(validate(t, ann), ModelError);
}

TEST(Alignment, ObservedEqualsSimulatedScoresFull) {
    const auto s = renault_nissan_scenario();
    const auto t = simulate(s);
    EXPECT_EQ(score_alignment(t, observed_equals_simulated(t, annotations_from_scenario(s))).score, 15);
}

TEST(Alignment, EscapedBoundsScoreZero) {
    const auto s = renault_nissan_scenario();
    auto t = simulate(s);
    t.records[30].dyads[0].trust = 1.2;
    EXPECT_EQ(score_alignment(t, annotations_from_scenario(s)).score, 0);
}

TEST(Behavioral, CountsCorrectPhases) {
    const auto s = renault_nissan_scenario();
    const auto t = simulate(s);
    auto ann = annotations_from_scenario(s);
    EXPECT_EQ(score_behavioral(t, ann).score, 15);
    ann[0].expected = ann[1].expected = ExpectedDirection::violation;
    EXPECT_EQ(score_behavioral(t, ann).score, 9);
    for (auto& a : ann)
        a.expected = a.expected == ExpectedDirection::violation && a.name == "crisis" ? ExpectedDirection::cooperative
                                                                                      : ExpectedDirection::violation;
    EXPECT_EQ(score_behavioral(t, ann).score, 0);
}

TEST(Mechanism, NoViolationCapsTheScore) {
    const auto t = simulate(synthetic({{"calm", 20, {1.0, 1.0}, {}}}));
    EXPECT_LE(score_mechanism(t).score, 5);
}

TEST(Mechanism, SymmetricRatesFailAsymmetry) {
    TrustValues v;
    v.lambda_plus = 0.3;
    v.lambda_minus = 0.3;
    v.xi = 0.0;
    const auto t = simulate(synthetic({{"rise", 10, {2.0, 2.0}, {}}, {"crisis", 3, {-2.0, -2.0}, {}}, {"recover", 10, {2.0, 2.0}, {}}}, v));
    const auto m = score_mechanism(t);
    EXPECT_LE(m.score, 10);
    EXPECT_EQ(m.checks[0].name, "asymmetry");
    EXPECT_EQ(m.checks[0].points, 0);
}

TEST(Outcome, FinalLevelAndTransitions) {
    const auto high = simulate(synthetic({{"calm", 40, {2.0, 2.0}, {}}, {"calm2", 10, {2.0, 2.0}, {}}}));
    ASSERT_GT(high.mean_trust(high.size() - 1), 0.8);
    EXPECT_EQ(score_outcome(high, annotations_from_scenario(synthetic({{"calm", 40, {2.0, 2.0}, {}}, {"calm2", 10, {2.0, 2.0}, {}}}))).score, 4);
    const auto s = full_marks();
    EXPECT_EQ(score_outcome(simulate(s), annotations_from_scenario(s)).score, 15);
}

TEST(Validate, PerfectSyntheticScoresSixty) {
    const auto s = full_marks();
    const auto t = simulate(s);
    const auto r = validate(t, observed_equals_simulated(t, annotations_from_scenario(s)));
    EXPECT_EQ(r.alignment.score, 15);
    EXPECT_EQ(r.behavioral.score, 15);
    EXPECT_EQ(r.mechanism.score, 15);
    EXPECT_EQ(r.outcome.score, 15);
    EXPECT_EQ(r.total, 60);
}

TEST(Regression, ConstantTrustHasZeroSlope) {
    const auto t = simulate(synthetic({{"idle", 10, {0.0, 0.0}, {}}}));
    const auto fit = phase_trend_regression(t, annotations_from_scenario(synthetic({{"idle", 10, {0.0, 0.0}, {}}}))[0]);
    EXPECT_EQ(fit.slope, 0.0);
}
