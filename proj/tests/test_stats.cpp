#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "coopetition/stats.hpp"

using namespace coop;
using namespace coop::stats;

TEST(Summary, HandValues) {
    const std::vector<double> xs{4.0, 1.0, 3.0, 2.0, 5.0};
    const auto s = summarize(xs);
    EXPECT_EQ(s.min, 1.0);
    EXPECT_EQ(s.q1, 2.0);
    EXPECT_EQ(s.median, 3.0);
    EXPECT_EQ(s.q3, 4.0);
    EXPECT_EQ(s.max, 5.0);
    EXPECT_DOUBLE_EQ(s.mean, 3.0);
    EXPECT_DOUBLE_EQ(s.std, std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(quantile_sorted(std::vector<double>{0.0, 10.0}, 0.3), 3.0);
    EXPECT_THROW(quantile_sorted(std::vector<double>{}, 0.5), ModelError);
}

TEST(Pearson, PerfectAndDegenerate) {
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{5, 5, 5, 5};
    EXPECT_DOUBLE_EQ(pearson(x, y).r, 1.0);
    const std::vector<double> neg{8, 6, 4, 2};
    EXPECT_DOUBLE_EQ(pearson(x, neg).r, -1.0);
    const auto d = pearson(x, z);
    EXPECT_TRUE(d.degenerate);
    EXPECT_EQ(d.r, 0.0);
}

TEST(Anova, HandValue) {
    const auto r = anova_oneway({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}});
    EXPECT_DOUBLE_EQ(r.F, 3.0);
    EXPECT_EQ(r.df_between, 2);
    EXPECT_EQ(r.df_within, 6);
    EXPECT_EQ(r.status, AnovaStatus::ok);
    EXPECT_NEAR(r.p, 0.125, 1e-12);
}

TEST(Anova, DegenerateAndInfinite) {
    EXPECT_EQ(anova_oneway({{1, 1}, {1, 1}}).status, AnovaStatus::degenerate);
    const auto inf = anova_oneway({{1, 1}, {2, 2}});
    EXPECT_EQ(inf.status, AnovaStatus::infinite);
    EXPECT_TRUE(std::isinf(inf.F));
    EXPECT_EQ(inf.p, 0.0);
    EXPECT_THROW(anova_oneway({{1, 2}}), ModelError);
    EXPECT_THROW(anova_oneway({{1}, {2}}), ModelError);
}

TEST(Anova, InvariantUnderAffineMaps) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::vector<double>> g(4);
    for (std::size_t k = 0; k < g.size(); ++k)
        for (int i = 0; i < 6 + int(k); ++i) g[k].push_back(n(rng) + 0.5 * double(k));
    auto mapped = g;
    for (auto& grp : mapped)
        for (auto& x : grp) x = 3.5 * x - 7.0;
    EXPECT_NEAR(anova_oneway(g).F, anova_oneway(mapped).F, 1e-9);
}

TEST(Distributions, IncompleteBetaMatchesBoost) {
    for (double a : {0.5, 1.0, 2.5, 37.5})
        for (double b : {0.5, 2.0, 9.0})
            for (double x : {0.001, 0.2, 0.5, 0.77, 0.999})
                EXPECT_NEAR(incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12) << a << " " << b << " " << x;
}

TEST(Distributions, TailsMatchBoost) {
    for (double d1 : {1.0, 4.0})
        for (double d2 : {6.0, 75.0})
            for (double f : {0.3, 1.0, 3.0, 35.05}) {
                boost::math::fisher_f dist(d1, d2);
                const double expected = boost::math::cdf(boost::math::complement(dist, f));
                EXPECT_NEAR(f_upper_tail(f, d1, d2), expected, 1e-12 + 1e-9 * expected);
            }
    for (double df : {3.0, 10.0, 78.0})
        for (double t : {-2.5, 0.4, 1.96, 6.0}) {
            boost::math::students_t dist(df);
            const double expected = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
            EXPECT_NEAR(t_two_sided(t, df), expected, 1e-12 + 1e-9 * expected);
        }
}

TEST(Regression, ExactLine) {
    std::vector<double> x, y;
    for (int k = 0; k < 20; ++k) {
        x.push_back(k);
        y.push_back(0.4 + 0.01 * k);
    }
    const auto r = linear_regression(x, y);
    EXPECT_NEAR(r.slope, 0.01, 1e-15);
    EXPECT_NEAR(r.intercept, 0.4, 1e-14);
    EXPECT_LT(r.p, 1e-10);
    EXPECT_EQ(r.n, 20u);
}

TEST(Regression, NoisyMatchesBoostT) {
    const std::vector<double> x{1, 2, 3, 4, 5, 6}, y{1.1, 1.9, 3.2, 3.8, 5.3, 5.9};
    const auto r = linear_regression(x, y);
    boost::math::students_t dist(4.0);
    EXPECT_NEAR(r.p, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))), 1e-12);
    EXPECT_THROW(linear_regression(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), ModelError);
    EXPECT_THROW(linear_regression(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ModelError);
}
