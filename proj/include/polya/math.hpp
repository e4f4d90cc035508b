#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "polya/params.hpp"

namespace polya {

/// ln of the rising factorial a^[k] = a(a+1)...(a+k-1) = Gamma(a+k)/Gamma(a).
/// Small k is accumulated as a plain log-sum; large k goes through the
/// log-gamma difference. k = 0 is the empty product.
inline double log_rising_factorial(double a, std::int64_t k) {
    if (!(a > 0.0)) throw std::domain_error("log_rising_factorial: base must be positive");
    if (k < 0) throw std::domain_error("log_rising_factorial: negative exponent");
    constexpr std::int64_t kDirectLimit = 32;
    if (k <= kDirectLimit) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < k; ++i) acc += std::log(a + static_cast<double>(i));
        return acc;
    }
    return std::lgamma(a + static_cast<double>(k)) - std::lgamma(a);
}

/// ln of the multinomial coefficient n! / (x_1! ... x_m!) for n = sum x_i.
inline double log_multinomial(const Composition& x) {
    std::int64_t n = 0;
    double denom = 0.0;
    for (std::int64_t c : x) {
        if (c < 0) throw std::domain_error("log_multinomial: negative count");
        n += c;
        denom += std::lgamma(static_cast<double>(c) + 1.0);
    }
    return std::lgamma(static_cast<double>(n) + 1.0) - denom;
}

/// ln p(x) for the exchangeable urn distribution on the level-n simplex:
///   p(x) = multinomial(n; x_1..x_m) * prod_i alpha^[x_i] / theta^[n]
inline double log_polya_pmf(const ModelParams& params, const Composition& x) {
    require_compatible(params, x);
    const std::int64_t n = level(x);
    double lp = log_multinomial(x) - log_rising_factorial(params.theta(), n);
    for (std::int64_t c : x) lp += log_rising_factorial(params.alpha(), c);
    return lp;
}

/// ln probability of drawing a specific color sequence. Exchangeable: the
/// value depends only on the per-color counts k_i,
///   p = prod_i alpha^[k_i] / theta^[n].
inline double log_sequence_prob(const ModelParams& params,
                                const std::vector<int>& color_sequence) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(params.m()), 0);
    for (int c : color_sequence) {
        require_color(params, c);
        ++counts[static_cast<std::size_t>(c)];
    }
    double lp = -log_rising_factorial(params.theta(), static_cast<std::int64_t>(color_sequence.size()));
    for (std::int64_t k : counts) lp += log_rising_factorial(params.alpha(), k);
    return lp;
}

/// ln of the symmetric Dirichlet density Gamma(theta)/Gamma(alpha)^m * prod w_i^(alpha-1)
/// at a point w of the probability simplex. Boundary points are singular for
/// alpha < 1 and are rejected; for alpha > 1 they carry zero density (-inf).
inline double log_dirichlet_density(const ModelParams& params, const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != params.m())
        throw std::invalid_argument("log_dirichlet_density: wrong dimension");
    double sum = 0.0;
    for (double wi : w) {
        if (wi < 0.0) throw std::domain_error("log_dirichlet_density: negative weight");
        if (wi == 0.0 && params.alpha() < 1.0)
            throw std::domain_error("log_dirichlet_density: density singular at the boundary for alpha < 1");
        sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::domain_error("log_dirichlet_density: weights must sum to 1");

    const double alpha = params.alpha();
    double lp = std::lgamma(params.theta()) - params.m() * std::lgamma(alpha);
    for (double wi : w) {
        if (wi == 0.0) {
            if (alpha > 1.0) return -std::numeric_limits<double>::infinity();
            continue;  // alpha == 1: factor w^0 = 1
        }
        lp += (alpha - 1.0) * std::log(wi);
    }
    return lp;
}

}  // namespace polya
