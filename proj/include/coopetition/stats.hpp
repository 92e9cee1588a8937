#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "coopetition/error.hpp"

namespace coop::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw ModelError("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

// Population standard deviation (divisor n).
inline double population_std(std::span<const double> xs) {
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / double(xs.size()));
}

// Linear interpolation between order statistics at h = (n-1)q.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw ModelError("quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw ModelError("quantile level must lie in [0,1]");
    const double h = double(sorted.size() - 1) * q;
    const auto lo = std::size_t(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}

struct Summary {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0, std = 0;
};

inline Summary summarize(std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    Summary s;
    s.min = v.front();
    s.q1 = quantile_sorted(v, 0.25);
    s.median = quantile_sorted(v, 0.5);
    s.q3 = quantile_sorted(v, 0.75);
    s.max = v.back();
    s.mean = mean(xs);
    s.std = population_std(xs);
    return s;
}

struct Correlation {
    double r = 0.0;
    bool degenerate = false;  // one side has zero variance; r reported as 0
};

inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw ModelError("pearson needs equal nonempty samples");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = x[k] - mx, dy = y[k] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    auto constant = [](std::span<const double> v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo == *hi;
    };
    if (constant(x) || constant(y) || sxx == 0.0 || syy == 0.0) return {0.0, true};
    return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

namespace detail {

// Continued fraction for the incomplete beta, modified Lentz evaluation.
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw ModelError("incomplete beta continued fraction did not converge");
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw ModelError("incomplete beta needs positive shape parameters");
    if (!(x >= 0.0 && x <= 1.0)) throw ModelError("incomplete beta argument must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(F > f) for F(d1, d2).
inline double f_upper_tail(double f, double d1, double d2) {
    if (std::isinf(f)) return 0.0;
    if (!(f > 0.0)) return 1.0;
    return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

// Two-sided P(|T| > |t|) for Student t with df degrees of freedom.
inline double t_two_sided(double t, double df) {
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

enum class AnovaStatus { ok, infinite, degenerate };

struct AnovaResult {
    double F = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p = 1.0;
    AnovaStatus status = AnovaStatus::ok;
};

inline AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw ModelError("anova needs at least two groups");
    std::size_t total = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        if (g.empty()) throw ModelError("anova group must not be empty");
        total += g.size();
        grand += std::accumulate(g.begin(), g.end(), 0.0);
    }
    if (total <= groups.size()) throw ModelError("anova needs more samples than groups");
    grand /= double(total);
    double ss_between = 0.0, ss_within = 0.0;
    for (const auto& g : groups) {
        const double m = mean(g);
        ss_between += double(g.size()) * (m - grand) * (m - grand);
        for (double x : g) ss_within += (x - m) * (x - m);
    }
    AnovaResult r;
    r.df_between = int(groups.size()) - 1;
    r.df_within = int(total - groups.size());
    const double ms_between = ss_between / r.df_between;
    const double ms_within = ss_within / r.df_within;
    if (ms_within == 0.0) {
        if (ms_between == 0.0) {
            r.F = std::numeric_limits<double>::quiet_NaN();
            r.p = std::numeric_limits<double>::quiet_NaN();
            r.status = AnovaStatus::degenerate;
        } else {
            r.F = std::numeric_limits<double>::infinity();
            r.p = 0.0;
            r.status = AnovaStatus::infinite;
        }
        return r;
    }
    r.F = ms_between / ms_within;
    r.p = f_upper_tail(r.F, r.df_between, r.df_within);
    return r;
}

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double t = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// Ordinary least squares of y on x with a two-sided t test on the slope.
inline RegressionResult linear_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ModelError("regression samples differ in length");
    if (x.size() < 3) throw ModelError("regression needs at least three points");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (sxx == 0.0) throw ModelError("regression predictor has zero variance");
    RegressionResult r;
    r.n = x.size();
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double sse = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - (r.intercept + r.slope * x[k]);
        sse += e * e;
    }
    const double df = double(x.size() - 2);
    const double se = std::sqrt(sse / df / sxx);
    if (se == 0.0) {
        r.t = r.slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.slope);
    } else {
        r.t = r.slope / se;
    }
    r.p = t_two_sided(r.t, df);
    return r;
}

} // namespace coop::stats
