#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "coopetition/trust.hpp"

using namespace coop;

namespace {

TrustParams params_with(double lp, double lm, double mu, double dr, double xi) {
    TrustValues v;
    v.lambda_plus = lp;
    v.lambda_minus = lm;
    v.mu_R = mu;
    v.delta_R = dr;
    v.xi = xi;
    return TrustParams(v);
}

} // namespace

TEST(Signal, ZeroDeviationIsZero) {
    EXPECT_EQ(cooperation_signal(1.0, 1.0, 1.0).value(), 0.0);
}

TEST(Signal, MatchesTanhReferenceValues) {
    EXPECT_NEAR(cooperation_signal(3.0, 1.0, 0.5).value(), 0.761594, 1e-6);
    EXPECT_NEAR(cooperation_signal(0.0, 3.0, 1.0).value(), -0.995055, 1e-6);
}

TEST(Signal, OddAroundBaseline) {
    for (double x : {0.1, 0.7, 1.9, 2.5})
        EXPECT_DOUBLE_EQ(cooperation_signal(3.0 + x, 3.0, 0.8).value(), -cooperation_signal(3.0 - x, 3.0, 0.8).value());
}

TEST(Signal, StaysInsideOpenIntervalWhenTanhSaturates) {
    const double s = signal_from_deviation(50.0, 1.0).value();
    EXPECT_LT(s, 1.0);
    EXPECT_GT(signal_from_deviation(-50.0, 1.0).value(), -1.0);
}

TEST(Signal, RejectsInvalidInputs) {
    EXPECT_THROW(cooperation_signal(-0.1, 1.0, 1.0), ModelError);
    EXPECT_THROW(signal_from_deviation(1.0, 0.0), ModelError);
    EXPECT_THROW(signal_from_deviation(NAN, 1.0), ModelError);
    EXPECT_THROW(CooperationSignal(1.0), ModelError);
}

TEST(TrustDelta, PositiveBranchHandValue) {
    const auto p = params_with(0.1, 0.3, 0.6, 0.02, 0.5);
    EXPECT_NEAR(trust_delta({0.5, 0.0}, CooperationSignal(0.5), 0.0, p), 0.025, 1e-15);
}

TEST(TrustDelta, NegativeBranchHandValue) {
    const auto p = params_with(0.1, 0.3, 0.6, 0.02, 0.5);
    EXPECT_NEAR(trust_delta({0.8, 0.0}, CooperationSignal(-0.5), 0.8, p), -0.168, 1e-15);
}

TEST(TrustDelta, SaturatesAtTheEdges) {
    const TrustParams p;
    EXPECT_EQ(trust_delta({1.0, 0.0}, CooperationSignal(0.9), 0.3, p), 0.0);
    EXPECT_EQ(trust_delta({0.0, 0.4}, CooperationSignal(-0.9), 0.3, p), 0.0);
    EXPECT_EQ(trust_delta({0.0, 0.4}, CooperationSignal(0.0), 0.3, p), 0.0);
}

TEST(Reputation, DecayOnlyUnderCooperation) {
    const auto p = params_with(0.1, 0.3, 0.6, 0.03, 0.5);
    EXPECT_NEAR(reputation_step({0.5, 0.5}, CooperationSignal(0.2), p), 0.485, 1e-15);
}

TEST(Reputation, DamageOnlyFromPristine) {
    const auto p = params_with(0.1, 0.3, 0.6, 0.03, 0.5);
    EXPECT_NEAR(reputation_step({0.5, 0.0}, CooperationSignal(-0.5), p), 0.300, 1e-15);
}

TEST(Reputation, FullDamageOnlyDecays) {
    const auto p = params_with(0.1, 0.3, 0.6, 0.03, 0.5);
    const double s = std::nextafter(-1.0, 0.0);
    EXPECT_NEAR(reputation_step({0.5, 1.0}, CooperationSignal(s), p), 1.0 - 0.03, 1e-15);
}

TEST(DyadStep, SevereViolationFromFullTrust) {
    const auto p = params_with(0.1, 0.3, 0.6, 0.02, 0.5);
    const DyadState next = dyad_step({1.0, 0.0}, 0.0, 3.0, 0.6, p);
    const double s = std::tanh(-3.0);
    EXPECT_NEAR(next.trust, 1.0 + 0.3 * s * 1.3, 1e-15);
    EXPECT_NEAR(next.reputation_damage, 0.6 * -s, 1e-15);
    EXPECT_NEAR(next.trust, 0.6119, 1e-4);
    EXPECT_NEAR(next.reputation_damage, 0.5970, 1e-4);
}

TEST(DyadStep, ZeroDeviationOnlyDecaysReputation) {
    const TrustParams p;
    const DyadState next = dyad_step({0.37, 0.4}, 1.0, 1.0, 0.5, p);
    EXPECT_EQ(next.trust, 0.37);
    EXPECT_DOUBLE_EQ(next.reputation_damage, 0.4 * (1.0 - p.delta_R()));
}

TEST(DyadStep, DoubleSaturation) {
    const TrustParams p;
    for (double a : {0.0, 1.0, 3.0}) {
        const DyadState next = dyad_step({0.0, 1.0}, a, 1.0, 0.7, p);
        EXPECT_EQ(next.trust, 0.0);
        EXPECT_DOUBLE_EQ(next.reputation_damage, 1.0 - p.delta_R());
    }
}

TEST(DyadStep, RejectsOutOfRangeInputs) {
    const TrustParams p;
    EXPECT_THROW(dyad_step({1.2, 0.0}, CooperationSignal(0.1), 0.5, p), ModelError);
    EXPECT_THROW(dyad_step({0.5, -0.1}, CooperationSignal(0.1), 0.5, p), ModelError);
    EXPECT_THROW(dyad_step({0.5, 0.0}, CooperationSignal(0.1), 1.5, p), ModelError);
}

TEST(TrustParams, ValidatesRanges) {
    TrustValues v;
    v.lambda_plus = 0.0;
    EXPECT_THROW(TrustParams{v}, ModelError);
    v = {};
    v.xi = 1.5;
    EXPECT_THROW(TrustParams{v}, ModelError);
    v = {};
    v.discount = 1.0;
    EXPECT_THROW(TrustParams{v}, ModelError);
    v = {};
    v.discount = 0.0;
    EXPECT_NO_THROW(TrustParams{v});
    v = {};
    v.lambda_minus = 0.9;
    v.xi = 1.0;
    EXPECT_THROW(TrustParams{v}, ModelError);
}

TEST(SystemStep, SymmetricInputsGiveSymmetricState) {
    const TrustParams p;
    const auto D = InterdependenceMatrix::from_rows({{0, 0.4}, {0.4, 0}});
    SystemState s(2, {0.6, 0.1});
    for (int t = 0; t < 10; ++t) s = system_step_deviations(s, std::vector<double>{t % 3 - 1.0, t % 3 - 1.0}, D, p);
    EXPECT_EQ(s.at(0, 1), s.at(1, 0));
    EXPECT_EQ(s.period(), 10u);
}

TEST(SystemStep, TwoActorsReduceToDyadSteps) {
    const TrustParams p;
    const auto D = InterdependenceMatrix::from_rows({{0, 0.51}, {0.655, 0}});
    SystemState s(2, {0.5, 0.0});
    s.set(1, 0, {0.7, 0.2});
    const std::vector<double> actions{2.5, 0.0}, baselines{1.0, 1.0};
    const SystemState next = system_step(s, actions, baselines, D, p);
    EXPECT_EQ(next.at(0, 1), dyad_step(s.at(0, 1), actions[1], baselines[1], 0.51, p));
    EXPECT_EQ(next.at(1, 0), dyad_step(s.at(1, 0), actions[0], baselines[0], 0.655, p));
}

TEST(SystemStep, ThreeActorsMatchIndependentDyads) {
    const TrustParams p;
    const auto D = InterdependenceMatrix::from_rows({{0, 0.2, 0.3}, {0.4, 0, 0.5}, {0.6, 0.7, 0}});
    SystemState s(3, {0.5, 0.1});
    s.set(2, 0, {0.9, 0.0});
    const std::vector<double> dev{1.0, -2.0, 0.5};
    const SystemState next = system_step_deviations(s, dev, D, p);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            const DyadState expected = dyad_step(s.at(i, j), signal_from_deviation(dev[j], p.kappa_trust()), D(i, j), p);
            EXPECT_EQ(next.at(i, j), expected) << i << "," << j;
        }
}

TEST(SystemState, PairIndexRoundTrip) {
    SystemState s(4, {});
    for (std::size_t k = 0; k < s.dyad_count(); ++k) {
        auto [i, j] = s.pair_of(k);
        EXPECT_EQ(s.index(i, j), k);
    }
    EXPECT_THROW(s.index(1, 1), ModelError);
}

TEST(Properties, BoundsHoldOverLongRandomRuns) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> dev(-6.0, 6.0);
    std::uniform_real_distribution<double> lp(0.01, 0.99), lm(0.01, 0.5), mu(0.01, 0.99), dr(0.001, 0.99);
    DyadState s{unit(rng), unit(rng)};
    TrustParams p = params_with(0.1, 0.3, 0.6, 0.02, 0.5);
    for (int step = 0; step < 100000; ++step) {
        if (step % 1000 == 0) p = params_with(lp(rng), lm(rng), mu(rng), dr(rng), unit(rng));
        double d = dev(rng);
        if (step % 97 == 0) d *= 100.0;
        s = dyad_step(s, signal_from_deviation(d, 0.5 + unit(rng)), unit(rng), p);
        ASSERT_GE(s.trust, -1e-12);
        ASSERT_LE(s.trust, 1.0 + 1e-12);
        ASSERT_GE(s.reputation_damage, -1e-12);
        ASSERT_LE(s.reputation_damage, 1.0 + 1e-12);
    }
}

TEST(Properties, ReputationDecaysGeometricallyUnderCooperation) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto p = params_with(0.1, 0.3, 0.6, 0.035, 0.5);
    DyadState s{0.3, 0.8};
    for (int k = 1; k <= 200; ++k) {
        s = dyad_step(s, signal_from_deviation(3.0 * unit(rng), 1.0), unit(rng), p);
        ASSERT_NEAR(s.reputation_damage, 0.8 * std::pow(1.0 - 0.035, k), 1e-12);
    }
}

TEST(Properties, ErosionAmplificationClosedForm) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const auto p = params_with(0.1, 0.05 + 0.4 * unit(rng), 0.6, 0.02, unit(rng));
        const DyadState pre{0.05 + 0.95 * unit(rng), unit(rng)};
        const CooperationSignal sig(-unit(rng) * 0.999);
        const double hi = 0.5 + 0.5 * unit(rng), lo = 0.5 * unit(rng);
        const double loss_hi = pre.trust - dyad_step(pre, sig, hi, p).trust;
        const double loss_lo = pre.trust - dyad_step(pre, sig, lo, p).trust;
        if (loss_lo < 1e-6) continue;
        ASSERT_NEAR(loss_hi / loss_lo, (1.0 + p.xi() * hi) / (1.0 + p.xi() * lo), 1e-9);
    }
}

TEST(Properties, TrustMonotoneInSignal) {
    const TrustParams p;
    const DyadState s{0.4, 0.3};
    double prev = -1.0;
    for (double x = -0.99; x < 0.99; x += 0.01) {
        const double t = dyad_step(s, CooperationSignal(x), 0.5, p).trust;
        EXPECT_GE(t, prev);
        prev = t;
    }
}
