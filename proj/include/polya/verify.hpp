#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polya/kernels.hpp"
#include "polya/math.hpp"
#include "polya/params.hpp"
#include "polya/simplex.hpp"

namespace polya {

/// Exact mode is limited to simplexes that fit comfortably in memory; larger
/// instances should be checked by Monte Carlo (see the simulate module).
inline constexpr std::uint64_t kMaxExactStates = 200000;

inline void require_enumerable(const SimplexIndex& idx) {
    if (idx.size() > kMaxExactStates)
        throw std::domain_error("simplex has " + std::to_string(idx.size()) +
                                " states, beyond the exact-mode limit of " +
                                std::to_string(kMaxExactStates) +
                                "; use Monte Carlo checks via simulation instead");
}

/// Probability mass over one simplex C_n, stored densely in enumeration order.
struct DistributionVector {
    SimplexIndex index;
    std::vector<double> probs;
};

/// Row-stochastic transition kernel between simplexes whose levels differ by
/// 0 or +-1. Rows are sparse (at most m^2 reachable targets per state) and
/// kept sorted by target index.
class KernelMatrix {
public:
    using Entry = std::pair<std::uint64_t, double>;  // (target index, probability)

    KernelMatrix(SimplexIndex source, SimplexIndex target)
        : source_(std::move(source)),
          target_(std::move(target)),
          rows_(static_cast<std::size_t>(source_.size())) {}

    const SimplexIndex& source() const { return source_; }
    const SimplexIndex& target() const { return target_; }

    const std::vector<Entry>& row(std::uint64_t i) const { return rows_[static_cast<std::size_t>(i)]; }

    void set_row(std::uint64_t i, std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end());
        rows_[static_cast<std::size_t>(i)] = std::move(entries);
    }

    double at(std::uint64_t i, std::uint64_t j) const {
        const auto& r = rows_[static_cast<std::size_t>(i)];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const Entry& e, std::uint64_t key) { return e.first < key; });
        return (it != r.end() && it->first == j) ? it->second : 0.0;
    }

    double row_sum(std::uint64_t i) const {
        double s = 0.0;
        for (const auto& [j, p] : rows_[static_cast<std::size_t>(i)]) s += p;
        return s;
    }

    /// pi^T K for a distribution pi over the source simplex.
    std::vector<double> pushforward(const std::vector<double>& pi) const {
        if (pi.size() != rows_.size())
            throw std::invalid_argument("pushforward: distribution size does not match kernel");
        std::vector<double> out(static_cast<std::size_t>(target_.size()), 0.0);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (const auto& [j, p] : rows_[i]) out[static_cast<std::size_t>(j)] += pi[i] * p;
        return out;
    }

    /// Dense materialization, for small simplexes and tests.
    std::vector<std::vector<double>> dense() const {
        std::vector<std::vector<double>> mat(rows_.size(),
                                             std::vector<double>(static_cast<std::size_t>(target_.size()), 0.0));
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (const auto& [j, p] : rows_[i]) mat[i][static_cast<std::size_t>(j)] = p;
        return mat;
    }

private:
    SimplexIndex source_;
    SimplexIndex target_;
    std::vector<std::vector<Entry>> rows_;
};

/// Builds the composite kernel on C_n in either order.
inline KernelMatrix build_composite_kernel(const ModelParams& params, std::int64_t n,
                                           CompositeOrder order) {
    if (n == 0 && order == CompositeOrder::DownUp)
        throw std::domain_error("build_composite_kernel: DownUp undefined at level 0");
    SimplexIndex idx(params.m(), n);
    require_enumerable(idx);
    KernelMatrix kernel(idx, idx);
    const int m = params.m();
    Composition x(static_cast<std::size_t>(m), 0);
    x[0] = n;
    std::uint64_t i_row = 0;
    do {
        std::vector<KernelMatrix::Entry> entries;
        entries.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
        double stay = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const double q = (order == CompositeOrder::DownUp) ? downup_prob(params, x, i, j)
                                                                   : updown_prob(params, x, i, j);
                if (i == j) {
                    stay += q;
                } else if (q > 0.0) {
                    Composition y = x;
                    y[static_cast<std::size_t>(i)] -= 1;
                    y[static_cast<std::size_t>(j)] += 1;
                    entries.emplace_back(idx.rank(y), q);
                }
            }
        }
        entries.emplace_back(i_row, stay);
        kernel.set_row(i_row, std::move(entries));
        ++i_row;
    } while (SimplexIndex::next_composition(x));
    return kernel;
}

/// Materializes the UP (C_n -> C_{n+1}), DOWN (C_n -> C_{n-1}) or composite
/// DOWN/UP (C_n -> C_n) kernel at level n.
inline KernelMatrix build_kernel(const ModelParams& params, StepKind kind, std::int64_t n) {
    if (n == 0 && kind != StepKind::Up)
        throw std::domain_error("build_kernel: no ball to remove at level 0");
    if (kind == StepKind::DownUp) return build_composite_kernel(params, n, CompositeOrder::DownUp);

    SimplexIndex source(params.m(), n);
    SimplexIndex target(params.m(), kind == StepKind::Up ? n + 1 : n - 1);
    require_enumerable(source);
    require_enumerable(target);
    KernelMatrix kernel(source, target);
    const int m = params.m();
    Composition x(static_cast<std::size_t>(m), 0);
    x[0] = n;
    std::uint64_t i_row = 0;
    do {
        std::vector<KernelMatrix::Entry> entries;
        entries.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const double p = (kind == StepKind::Up) ? up_prob(params, x, i) : down_prob(params, x, i);
            if (p == 0.0) continue;
            Composition y = x;
            y[static_cast<std::size_t>(i)] += (kind == StepKind::Up) ? 1 : -1;
            entries.emplace_back(target.rank(y), p);
        }
        kernel.set_row(i_row, std::move(entries));
        ++i_row;
    } while (SimplexIndex::next_composition(x));
    return kernel;
}

/// Vectorizes the exact pmf over C_n.
inline DistributionVector polya_distribution(const ModelParams& params, std::int64_t n) {
    SimplexIndex idx(params.m(), n);
    require_enumerable(idx);
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(idx.size()));
    Composition x(static_cast<std::size_t>(params.m()), 0);
    x[0] = n;
    do {
        probs.push_back(std::exp(log_polya_pmf(params, x)));
    } while (SimplexIndex::next_composition(x));
    return DistributionVector{std::move(idx), std::move(probs)};
}

/// Outcome of one equilibrium identity check: the worst residual found and
/// the state (or state pair) where it occurs.
struct CheckReport {
    std::string check;
    double alpha;
    int stocks;
    std::int64_t level;
    double residual;
    std::vector<Composition> argmax_state;
};

/// ||pi^T P - pi^T||_inf for pi the exact pmf and P the composite kernel.
inline CheckReport check_stationarity(const ModelParams& params, std::int64_t n,
                                      CompositeOrder order = CompositeOrder::DownUp) {
    if (n < 1) throw std::domain_error("check_stationarity: need level >= 1");
    const DistributionVector pi = polya_distribution(params, n);
    const KernelMatrix kernel = build_composite_kernel(params, n, order);
    const std::vector<double> pushed = kernel.pushforward(pi.probs);
    double worst = 0.0;
    std::uint64_t arg = 0;
    for (std::uint64_t j = 0; j < pi.index.size(); ++j) {
        const double r = std::abs(pushed[static_cast<std::size_t>(j)] - pi.probs[static_cast<std::size_t>(j)]);
        if (r > worst) { worst = r; arg = j; }
    }
    const char* name = (order == CompositeOrder::DownUp) ? "stationarity" : "stationarity_updown";
    return CheckReport{name, params.alpha(), params.m(), n, worst, {pi.index.unrank(arg)}};
}

/// max over ordered pairs (a,b) of |pi(a)q(a->b) - pi(b)q(b->a)| for the
/// DOWN/UP kernel. Pairs more than one move apart carry zero flow both ways.
inline CheckReport check_detailed_balance(const ModelParams& params, std::int64_t n) {
    if (n < 1) throw std::domain_error("check_detailed_balance: need level >= 1");
    const DistributionVector pi = polya_distribution(params, n);
    const KernelMatrix kernel = build_composite_kernel(params, n, CompositeOrder::DownUp);
    double worst = 0.0;
    std::uint64_t arg_a = 0, arg_b = 0;
    for (std::uint64_t a = 0; a < pi.index.size(); ++a) {
        for (const auto& [b, q_ab] : kernel.row(a)) {
            const double flow_ab = pi.probs[static_cast<std::size_t>(a)] * q_ab;
            const double flow_ba = pi.probs[static_cast<std::size_t>(b)] * kernel.at(b, a);
            const double v = std::abs(flow_ab - flow_ba);
            if (v > worst) { worst = v; arg_a = a; arg_b = b; }
        }
    }
    return CheckReport{"detailed_balance", params.alpha(), params.m(), n, worst,
                       {pi.index.unrank(arg_a), pi.index.unrank(arg_b)}};
}

/// UP: ||pi_n^T U - pi_{n+1}^T||_inf. DOWN: ||pi_n^T D - pi_{n-1}^T||_inf.
inline CheckReport check_pushforward(const ModelParams& params, std::int64_t n, StepKind kind) {
    if (kind == StepKind::DownUp)
        throw std::invalid_argument("check_pushforward: kind must be Up or Down");
    if (kind == StepKind::Down && n < 1)
        throw std::domain_error("check_pushforward: Down needs level >= 1");
    const DistributionVector pi = polya_distribution(params, n);
    const KernelMatrix kernel = build_kernel(params, kind, n);
    const std::int64_t n_to = (kind == StepKind::Up) ? n + 1 : n - 1;
    const DistributionVector pi_to = polya_distribution(params, n_to);
    const std::vector<double> pushed = kernel.pushforward(pi.probs);
    double worst = 0.0;
    std::uint64_t arg = 0;
    for (std::uint64_t j = 0; j < pi_to.index.size(); ++j) {
        const double r = std::abs(pushed[static_cast<std::size_t>(j)] - pi_to.probs[static_cast<std::size_t>(j)]);
        if (r > worst) { worst = r; arg = j; }
    }
    const char* name = (kind == StepKind::Up) ? "pushforward_up" : "pushforward_down";
    return CheckReport{name, params.alpha(), params.m(), n, worst, {pi_to.index.unrank(arg)}};
}

/// Cross-level reversibility between C_{n-1} and C_n: for b = a + e_i,
///   pi_{n-1}(a) u(a->b) = pi_n(b) d(b->a).
inline CheckReport check_cross_level_balance(const ModelParams& params, std::int64_t n) {
    if (n < 1) throw std::domain_error("check_cross_level_balance: need level >= 1");
    const DistributionVector pi_lo = polya_distribution(params, n - 1);
    const DistributionVector pi_hi = polya_distribution(params, n);
    double worst = 0.0;
    Composition arg_a, arg_b;
    Composition a(static_cast<std::size_t>(params.m()), 0);
    a[0] = n - 1;
    std::uint64_t ia = 0;
    do {
        for (int i = 0; i < params.m(); ++i) {
            Composition b = a;
            b[static_cast<std::size_t>(i)] += 1;
            const double up_flow = pi_lo.probs[static_cast<std::size_t>(ia)] * up_prob(params, a, i);
            const double down_flow =
                pi_hi.probs[static_cast<std::size_t>(pi_hi.index.rank(b))] * down_prob(params, b, i);
            const double v = std::abs(up_flow - down_flow);
            if (v > worst) { worst = v; arg_a = a; arg_b = b; }
        }
        ++ia;
    } while (SimplexIndex::next_composition(a));
    if (arg_a.empty()) { arg_a = pi_lo.index.unrank(0); arg_b = pi_hi.index.unrank(0); }
    return CheckReport{"cross_level_balance", params.alpha(), params.m(), n, worst, {arg_a, arg_b}};
}

/// (1/2) sum_i |p_i - q_i| over a shared simplex.
inline double total_variation(const DistributionVector& p, const DistributionVector& q) {
    if (p.index.m() != q.index.m() || p.index.n() != q.index.n())
        throw std::invalid_argument("total_variation: distributions live on different simplexes");
    double s = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) s += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * s;
}

}  // namespace polya
