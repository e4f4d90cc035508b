#pragma once

// Shared statistics helpers for the test binaries. These are independent
// oracles: they deliberately avoid the library's own probability code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace testutil {

/// Kolmogorov-Smirnov statistic of a sample against Uniform[0,1].
inline double ks_uniform(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("ks_uniform: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lo = xs[i] - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - xs[i];
        d = std::max({d, lo, hi});
    }
    return d;
}

/// Pearson chi-square statistic of observed counts against cell
/// probabilities. Zero-probability cells must have zero observations.
inline double chi_square(const std::vector<std::int64_t>& observed,
                         const std::vector<double>& probs, std::int64_t total) {
    if (observed.size() != probs.size())
        throw std::invalid_argument("chi_square: size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(total);
        if (expected == 0.0) {
            if (observed[i] != 0)
                throw std::invalid_argument("chi_square: mass in a zero-probability cell");
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

/// Upper 0.999 chi-square quantiles by degrees of freedom; a sampler test
/// comparing against these has a one-per-thousand false-alarm rate per check
/// (and the seeds are fixed, so green stays green).
inline double chi_square_crit_999(int df) {
    switch (df) {
        case 1: return 10.8276;
        case 2: return 13.8155;
        case 3: return 16.2662;
        case 4: return 18.4668;
        case 5: return 20.5150;
        default: throw std::invalid_argument("chi_square_crit_999: df not tabulated");
    }
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

/// ln Gamma(x) via the standard library; thin alias so oracle formulas in
/// tests read close to their textbook form.
inline double lgamma(double x) { return std::lgamma(x); }

}  // namespace testutil
