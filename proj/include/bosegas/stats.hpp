// stats.hpp — empirical-distribution machinery: KS statistic, empirical
// characteristic function, sample moments, histograms, and the GofReport
// verdict record shared by the verification suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bosegas {

// sup-norm distance between the empirical CDF and a reference CDF,
// evaluated at the sorted sample points (both one-sided gaps)
inline double ks_statistic(std::span<const double> samples,
                           const std::function<double(double)>& cdf) {
    if (samples.size() < 2)
        throw std::invalid_argument("ks_statistic: need at least 2 samples");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

// asymptotic Kolmogorov critical values; all suites use n >= 1e3
inline double ks_critical_5pct(std::int64_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }
inline double ks_critical_1pct(std::int64_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline std::complex<double> empirical_char_fn(std::span<const double> samples, double xi) {
    if (samples.empty())
        throw std::invalid_argument("empirical_char_fn: need at least 1 sample");
    double re = 0.0, im = 0.0;
    for (double x : samples) {
        re += std::cos(xi * x);
        im += std::sin(xi * x);
    }
    const double n = static_cast<double>(samples.size());
    return {re / n, im / n};
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;        // unbiased (n-1) estimator
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool higher_defined = true;   // false when all samples coincide
};

inline Moments moments(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("moments: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    Moments out;
    out.mean = mean;
    out.variance = m2 * n / (n - 1.0);
    if (m2 > 0.0) {
        out.skewness = m3 / std::pow(m2, 1.5);
        out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        out.higher_defined = false;
        out.skewness = std::numeric_limits<double>::quiet_NaN();
        out.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

struct HistogramBin {
    double left;
    double right;
    std::int64_t count;
};

// equal-width bins spanning [min, max]; the right edge of the last bin is
// inclusive so counts always sum to the sample count
inline std::vector<HistogramBin> histogram(std::span<const double> samples, int bin_count) {
    if (bin_count < 1) throw std::invalid_argument("histogram: bin_count must be >= 1");
    if (samples.empty()) throw std::invalid_argument("histogram: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn_it, hi = *mx_it;
    std::vector<HistogramBin> bins(static_cast<std::size_t>(bin_count));
    const double width = (hi - lo) / bin_count;
    for (int b = 0; b < bin_count; ++b)
        bins[static_cast<std::size_t>(b)] = {lo + b * width, lo + (b + 1) * width, 0};
    bins.back().right = hi;
    for (double x : samples) {
        int b = (width > 0.0) ? static_cast<int>((x - lo) / width) : 0;
        if (b >= bin_count) b = bin_count - 1;
        if (b < 0) b = 0;
        ++bins[static_cast<std::size_t>(b)].count;
    }
    return bins;
}

// A single goodness-of-fit verdict.  `direction` records which inequality
// means success: "leq" for agreement checks, "geq" for checks that must
// exceed a critical value (e.g. provable non-normality).
struct GofReport {
    std::string test;       // ks-exact-cdf | ks-normal-fitted | moment-match | char-fn-match
    double statistic = 0.0;
    double threshold = 0.0;
    std::int64_t n_samples = 0;
    bool pass = false;
    std::string reference;
    std::string direction = "leq";
};

inline GofReport make_report(std::string test, double statistic, double threshold,
                             std::int64_t n_samples, std::string reference,
                             bool greater_is_pass = false) {
    GofReport r;
    r.test = std::move(test);
    r.statistic = statistic;
    r.threshold = threshold;
    r.n_samples = n_samples;
    r.reference = std::move(reference);
    r.direction = greater_is_pass ? "geq" : "leq";
    r.pass = greater_is_pass ? (statistic >= threshold) : (statistic <= threshold);
    return r;
}

inline nlohmann::json to_json(const GofReport& r) {
    return nlohmann::json{{"test", r.test},         {"statistic", r.statistic},
                          {"threshold", r.threshold}, {"n_samples", r.n_samples},
                          {"pass", r.pass},          {"reference", r.reference},
                          {"direction", r.direction}};
}

}  // namespace bosegas
