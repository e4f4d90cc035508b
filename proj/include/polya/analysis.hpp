#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "polya/params.hpp"
#include "polya/simulate.hpp"

namespace polya {

/// Capital distribution curve: weights sorted in decreasing order, paired
/// with 1-based ranks. log10 pairs are kept only for strictly positive
/// weights so the log-log view never sees -inf.
struct CapitalCurve {
    std::vector<std::int64_t> ranks;
    std::vector<double> weights;
    std::vector<std::pair<double, double>> log10_points;  // (log10 rank, log10 weight)
};

struct MarketSnapshot {
    struct Entry {
        std::string ticker;
        double market_cap;
    };
    std::string date_label;
    std::vector<Entry> entries;
};

namespace detail {

inline CapitalCurve curve_from_values(std::vector<double> values, std::int64_t top_k) {
    double total = 0.0;
    for (double v : values) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::domain_error("capital_curve: values must be finite and non-negative");
        total += v;
    }
    if (total <= 0.0) throw std::domain_error("capital_curve: total mass must be positive");
    std::stable_sort(values.begin(), values.end(), std::greater<double>());
    if (top_k > 0 && static_cast<std::size_t>(top_k) < values.size())
        values.resize(static_cast<std::size_t>(top_k));
    CapitalCurve curve;
    curve.ranks.reserve(values.size());
    curve.weights.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = values[i] / total;
        curve.ranks.push_back(static_cast<std::int64_t>(i) + 1);
        curve.weights.push_back(w);
        if (w > 0.0)
            curve.log10_points.emplace_back(std::log10(static_cast<double>(i + 1)), std::log10(w));
    }
    return curve;
}

}  // namespace detail

/// Curve from an urn state. Weights are normalized over all m stocks before
/// any top_k truncation, so a truncated curve keeps the full-market scale.
/// top_k <= 0 keeps every rank.
inline CapitalCurve capital_curve(const Composition& state, std::int64_t top_k = 0) {
    std::vector<double> values;
    values.reserve(state.size());
    for (std::int64_t c : state) {
        if (c < 0) throw std::domain_error("capital_curve: negative count");
        values.push_back(static_cast<double>(c));
    }
    return detail::curve_from_values(std::move(values), top_k);
}

/// Curve from observed market capitalizations.
inline CapitalCurve capital_curve(const MarketSnapshot& snapshot, std::int64_t top_k = 0) {
    std::vector<double> values;
    values.reserve(snapshot.entries.size());
    for (const auto& e : snapshot.entries) values.push_back(e.market_cap);
    return detail::curve_from_values(std::move(values), top_k);
}

/// Kendall tau-b between two score vectors over the same items. Handles ties
/// in either vector; returns a value in [-1, 1]. Degenerate inputs (all ties
/// on a side) have no defined correlation and throw.
inline double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kendall_tau: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw std::domain_error("kendall_tau: need at least two items");
    std::int64_t concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0.0 && db == 0.0) {
                ++ties_a;
                ++ties_b;
            } else if (da == 0.0) {
                ++ties_a;
            } else if (db == 0.0) {
                ++ties_b;
            } else if ((da > 0.0) == (db > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const std::int64_t pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    const double denom = std::sqrt(static_cast<double>(pairs - ties_a) *
                                   static_cast<double>(pairs - ties_b));
    if (denom == 0.0) throw std::domain_error("kendall_tau: all pairs tied on one side");
    // perfect agreement must come out as exactly +-1
    return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0, 1.0);
}

/// Stability of the fluctuation phase of one trajectory, measured between a
/// reference state (e.g. the state at the threshold) and a final state.
struct StabilityStats {
    /// max_i |w_i(final) - w_i(reference)| over stocks, weights on each side
    /// normalized by that side's level.
    double max_weight_deviation;
    /// Kendall tau-b of the two count vectors.
    double rank_correlation;
};

inline StabilityStats stability_between(const Composition& reference, const Composition& final_state) {
    require_compatible(reference, final_state);
    const double ref_level = static_cast<double>(level(reference));
    const double fin_level = static_cast<double>(level(final_state));
    if (ref_level <= 0.0 || fin_level <= 0.0)
        throw std::domain_error("stability_between: both states must have positive level");
    double max_dev = 0.0;
    std::vector<double> ref_counts(reference.size()), fin_counts(final_state.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        ref_counts[i] = static_cast<double>(reference[i]);
        fin_counts[i] = static_cast<double>(final_state[i]);
        const double dev = std::abs(fin_counts[i] / fin_level - ref_counts[i] / ref_level);
        max_dev = std::max(max_dev, dev);
    }
    return StabilityStats{max_dev, kendall_tau(ref_counts, fin_counts)};
}

/// Largest single-stock weight deviation from a reference state across a set
/// of observed states (all normalized by their own level).
inline double max_weight_deviation(const Composition& reference,
                                   const std::vector<Composition>& observed) {
    const double ref_level = static_cast<double>(level(reference));
    if (ref_level <= 0.0) throw std::domain_error("max_weight_deviation: empty reference");
    double worst = 0.0;
    for (const auto& state : observed) {
        require_compatible(reference, state);
        const double lvl = static_cast<double>(level(state));
        if (lvl <= 0.0) throw std::domain_error("max_weight_deviation: empty observed state");
        for (std::size_t i = 0; i < state.size(); ++i) {
            const double dev = std::abs(static_cast<double>(state[i]) / lvl -
                                        static_cast<double>(reference[i]) / ref_level);
            worst = std::max(worst, dev);
        }
    }
    return worst;
}

/// Window summary for one trajectory: how far each stock's weight strays from
/// its terminal weight inside [first_step, last_step], and how well the
/// ranking at the window's first recorded step agrees with the ranking at its
/// last (Kendall tau-b).
struct StabilityReport {
    std::vector<double> per_stock_max_deviation;  // vs terminal weights
    double max_weight_deviation;                  // max over stocks
    double rank_correlation;
};

inline StabilityReport stability_stats(const Trajectory& traj, std::int64_t first_step,
                                       std::int64_t last_step) {
    if (first_step > last_step)
        throw std::invalid_argument("stability_stats: window is empty");
    const double term_level = static_cast<double>(level(traj.terminal));
    if (term_level <= 0.0) throw std::domain_error("stability_stats: empty terminal state");
    const std::size_t m = traj.terminal.size();
    StabilityReport report{std::vector<double>(m, 0.0), 0.0, 0.0};
    const Composition* window_first = nullptr;
    const Composition* window_last = nullptr;
    for (const auto& rec : traj.records) {
        if (rec.step < first_step || rec.step > last_step) continue;
        if (!window_first) window_first = &rec.state;
        window_last = &rec.state;
        require_compatible(traj.terminal, rec.state);
        const double lvl = static_cast<double>(level(rec.state));
        if (lvl <= 0.0) throw std::domain_error("stability_stats: empty state in window");
        for (std::size_t i = 0; i < m; ++i) {
            const double dev = std::abs(static_cast<double>(rec.state[i]) / lvl -
                                        static_cast<double>(traj.terminal[i]) / term_level);
            report.per_stock_max_deviation[i] = std::max(report.per_stock_max_deviation[i], dev);
        }
    }
    if (!window_first)
        throw std::domain_error("stability_stats: no recorded steps inside the window");
    report.max_weight_deviation = *std::max_element(report.per_stock_max_deviation.begin(),
                                                    report.per_stock_max_deviation.end());
    std::vector<double> start_counts(m), end_counts(m);
    for (std::size_t i = 0; i < m; ++i) {
        start_counts[i] = static_cast<double>((*window_first)[i]);
        end_counts[i] = static_cast<double>((*window_last)[i]);
    }
    report.rank_correlation = kendall_tau(start_counts, end_counts);
    return report;
}

}  // namespace polya
