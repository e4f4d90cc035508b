#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "polya/params.hpp"
#include "polya/rng.hpp"

namespace polya {

/// The three lattice moves: UP adds one ball (C_n -> C_{n+1}), DOWN removes
/// one (C_n -> C_{n-1}), DOWNUP is the capital-conserving composite
/// (C_n -> C_n, remove then add).
enum class StepKind { Up, Down, DownUp };

inline const char* to_string(StepKind kind) {
    switch (kind) {
        case StepKind::Up: return "up";
        case StepKind::Down: return "down";
        case StepKind::DownUp: return "downup";
    }
    return "?";
}

/// Order of the two composite schemes. DownUp is the default throughout;
/// UpDown (add then remove) is the variant with the same stationary law.
enum class CompositeOrder { DownUp, UpDown };

/// One sampled move. moved_color_out is the decremented color (DOWN part),
/// moved_color_in the incremented one (UP part).
struct TransitionEvent {
    StepKind kind;
    Composition source;
    Composition target;
    std::optional<int> moved_color_out;
    std::optional<int> moved_color_in;
};

/// P(add a ball of color i) = (alpha + n_i) / (theta + n).
inline double up_prob(const ModelParams& params, const Composition& x, int i) {
    require_compatible(params, x);
    require_color(params, i);
    const double n = static_cast<double>(level(x));
    return (params.alpha() + static_cast<double>(x[static_cast<std::size_t>(i)])) /
           (params.theta() + n);
}

/// P(remove a ball of color i) = n_i / n. Undefined on the empty urn.
inline double down_prob(const ModelParams& params, const Composition& x, int i) {
    require_compatible(params, x);
    require_color(params, i);
    const std::int64_t n = level(x);
    if (n == 0) throw std::domain_error("down_prob: no ball to remove");
    return static_cast<double>(x[static_cast<std::size_t>(i)]) / static_cast<double>(n);
}

/// Composite remove-then-add probability:
///   q_{i->j} = (n_i/n) * (n_j + alpha)    / (n + theta - 1)   for i != j
///   q_{i->i} = (n_i/n) * (n_i + alpha - 1)/ (n + theta - 1)
/// The full return probability of x is the sum of the i = j terms over i.
inline double downup_prob(const ModelParams& params, const Composition& x, int i, int j) {
    require_compatible(params, x);
    require_color(params, i);
    require_color(params, j);
    const std::int64_t n = level(x);
    if (n == 0) throw std::domain_error("downup_prob: no ball to remove");
    const double ni = static_cast<double>(x[static_cast<std::size_t>(i)]);
    const double nj = static_cast<double>(x[static_cast<std::size_t>(j)]);
    const double denom = (static_cast<double>(n) + params.theta() - 1.0);
    const double pick = ni / static_cast<double>(n);
    if (i == j) return pick * (ni + params.alpha() - 1.0) / denom;
    return pick * (nj + params.alpha()) / denom;
}

/// Variant scheme, add-then-remove, stated as the net move i -> j (add a
/// ball of color j first, then remove one of color i):
///   q_{i->j} = (alpha + n_j)/(theta + n) * n_i/(n+1)       for i != j
///   q_{i->i} = (alpha + n_i)/(theta + n) * (n_i + 1)/(n+1)
inline double updown_prob(const ModelParams& params, const Composition& x, int i, int j) {
    require_compatible(params, x);
    require_color(params, i);
    require_color(params, j);
    const double n = static_cast<double>(level(x));
    const double ni = static_cast<double>(x[static_cast<std::size_t>(i)]);
    const double nj = static_cast<double>(x[static_cast<std::size_t>(j)]);
    const double up = (params.alpha() + nj) / (params.theta() + n);
    if (i == j) return up * (ni + 1.0) / (n + 1.0);
    return up * ni / (n + 1.0);
}

namespace detail {

// Inverse-CDF color draw with left-to-right cumulative order. weight(i) must
// sum to 1 over colors; rounding shortfall falls to the last color.
template <class WeightFn>
int pick_color(int m, RngEngine& rng, WeightFn weight) {
    const double u = canonical_uniform(rng);
    double cum = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        cum += weight(i);
        if (u < cum) return i;
    }
    return m - 1;
}

}  // namespace detail

/// Draws an UP move from the exact kernel distribution.
inline TransitionEvent sample_up(const ModelParams& params, const Composition& x, RngEngine& rng) {
    require_compatible(params, x);
    const double n = static_cast<double>(level(x));
    const double denom = params.theta() + n;
    const int i = detail::pick_color(params.m(), rng, [&](int c) {
        return (params.alpha() + static_cast<double>(x[static_cast<std::size_t>(c)])) / denom;
    });
    TransitionEvent ev{StepKind::Up, x, x, std::nullopt, i};
    ev.target[static_cast<std::size_t>(i)] += 1;
    return ev;
}

/// Draws a DOWN move; rejects the empty urn.
inline TransitionEvent sample_down(const ModelParams& params, const Composition& x, RngEngine& rng) {
    require_compatible(params, x);
    const std::int64_t n = level(x);
    if (n == 0) throw std::domain_error("sample_down: no ball to remove");
    const int i = detail::pick_color(params.m(), rng, [&](int c) {
        return static_cast<double>(x[static_cast<std::size_t>(c)]) / static_cast<double>(n);
    });
    TransitionEvent ev{StepKind::Down, x, x, i, std::nullopt};
    ev.target[static_cast<std::size_t>(i)] -= 1;
    return ev;
}

/// Composite draw, literally DOWN then UP through the intermediate state.
inline TransitionEvent sample_downup(const ModelParams& params, const Composition& x, RngEngine& rng) {
    TransitionEvent down = sample_down(params, x, rng);
    TransitionEvent up = sample_up(params, down.target, rng);
    return TransitionEvent{StepKind::DownUp, x, up.target, down.moved_color_out, up.moved_color_in};
}

}  // namespace polya
