#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "fpp/errors.hpp"

namespace fpp {

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0;
    double variance = 0;  // unbiased
    double sd = 0;
    double se_mean = 0;
    double se_variance = 0;
    double min = 0;
    double max = 0;
    double q05 = 0, q25 = 0, median = 0, q75 = 0, q95 = 0;
    double iqr = 0;
    double skewness = 0;  // g1
    double kurtosis = 0;  // excess, g2
};

// Linearly interpolated quantile of sorted data (Hyndman-Fan type 7).
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw contract_error("quantile of empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Sample mean; exact when all values coincide.
inline double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw contract_error("mean of empty sample");
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    if (*lo == *hi) return *lo;
    double sum = 0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline SummaryStats summarize(std::span<const double> xs) {
    if (xs.size() < 2) throw contract_error("summarize: need at least two values");
    SummaryStats s;
    s.count = xs.size();
    const double n = static_cast<double>(xs.size());
    s.mean = sample_mean(xs);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : xs) {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = m2 * n / (n - 1);
    s.sd = std::sqrt(s.variance);
    s.se_mean = s.sd / std::sqrt(n);
    // Var(s^2) ~ (mu4 - (n-3)/(n-1) sigma^4) / n
    s.se_variance = std::sqrt(std::max(0.0, (m4 - (n - 3) / (n - 1) * s.variance * s.variance) / n));
    s.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;

    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q05 = quantile_sorted(sorted, 0.05);
    s.q25 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q75 = quantile_sorted(sorted, 0.75);
    s.q95 = quantile_sorted(sorted, 0.95);
    s.iqr = s.q75 - s.q25;
    return s;
}

// Ordinary least squares y = intercept + slope * x with a two-sided
// confidence interval for the slope from Student's t with n - 2 dof.
struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double slope_se = 0;
    double ci_low = 0;
    double ci_high = 0;
    double confidence = 0.95;
    std::size_t points = 0;

    bool ci_contains_zero() const { return ci_low <= 0.0 && 0.0 <= ci_high; }
    bool significantly_positive() const { return ci_low > 0.0; }
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y, double confidence = 0.95) {
    if (x.size() != y.size() || x.size() < 3) throw contract_error("fit_line: need at least three (x, y) points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw contract_error("fit_line: x values must not all coincide");
    LinearFit fit;
    fit.points = x.size();
    fit.confidence = confidence;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / (n - 2) / sxx);
    const boost::math::students_t dist(n - 2);
    const double t = boost::math::quantile(boost::math::complement(dist, (1 - confidence) / 2));
    fit.ci_low = fit.slope - t * fit.slope_se;
    fit.ci_high = fit.slope + t * fit.slope_se;
    return fit;
}

// Two-sided one-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

// Asymptotic critical value c(alpha) / sqrt(n), c(alpha) = sqrt(-ln(alpha/2) / 2).
inline double ks_critical_value(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2)) / std::sqrt(static_cast<double>(n));
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace fpp
