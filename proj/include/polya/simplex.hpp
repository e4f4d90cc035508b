#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polya/params.hpp"

namespace polya {

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("simplex size exceeds 64-bit integer range");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("simplex size exceeds 64-bit integer range");
    return r;
}

}  // namespace detail

/// Dense bijection between the simplex C_n (compositions of n into m
/// non-negative parts) and indices 0..C(n+m-1, m-1)-1.
///
/// Enumeration order is lexicographically decreasing in (n_1,...,n_m):
/// (n,0,...,0) first, (0,...,0,n) last. The order is part of the contract;
/// file outputs rely on it being stable across runs.
class SimplexIndex {
public:
    SimplexIndex(int m, std::int64_t n) : m_(m), n_(n) {
        if (m < 1) throw std::domain_error("SimplexIndex: need at least one part");
        if (n < 0) throw std::domain_error("SimplexIndex: negative level");
        // counts_[p][k] = |C_k into p parts| = C(k+p-1, p-1), built by the
        // Pascal recurrence so every intermediate value is overflow-checked.
        counts_.assign(static_cast<std::size_t>(m) + 1,
                       std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
        counts_[0][0] = 1;
        for (int p = 1; p <= m; ++p) {
            counts_[p][0] = 1;
            for (std::int64_t k = 1; k <= n; ++k)
                counts_[p][k] = detail::checked_add(counts_[p][k - 1], counts_[p - 1][k]);
        }
    }

    int m() const { return m_; }
    std::int64_t n() const { return n_; }

    /// |C_n| = C(n+m-1, m-1), exact.
    std::uint64_t size() const { return counts_[static_cast<std::size_t>(m_)][static_cast<std::size_t>(n_)]; }

    /// Position of x in the enumeration order.
    std::uint64_t rank(const Composition& x) const {
        require_member(x);
        std::uint64_t r = 0;
        std::int64_t rem = n_;
        for (int pos = 0; pos + 1 < m_; ++pos) {
            const int parts_after = m_ - pos - 1;
            const std::int64_t v = x[static_cast<std::size_t>(pos)];
            // Compositions with a larger entry at this position come first:
            // sum_{u=v+1}^{rem} C_{rem-u} into parts_after parts, which
            // telescopes to |C_{rem-v-1} into (parts_after+1) parts|.
            if (v < rem)
                r = detail::checked_add(r, count(parts_after + 1, rem - v - 1));
            rem -= v;
        }
        return r;
    }

    /// Inverse of rank.
    Composition unrank(std::uint64_t i) const {
        if (i >= size())
            throw std::out_of_range("SimplexIndex::unrank: index " + std::to_string(i) +
                                    " out of range for simplex of size " + std::to_string(size()));
        Composition x(static_cast<std::size_t>(m_), 0);
        std::int64_t rem = n_;
        for (int pos = 0; pos + 1 < m_; ++pos) {
            const int parts_after = m_ - pos - 1;
            std::int64_t v = rem;
            while (true) {
                const std::uint64_t block = count(parts_after, rem - v);
                if (i < block) break;
                i -= block;
                --v;
            }
            x[static_cast<std::size_t>(pos)] = v;
            rem -= v;
        }
        x[static_cast<std::size_t>(m_) - 1] = rem;
        return x;
    }

    /// In-place successor in enumeration order; false once x is the last
    /// composition (0,...,0,n).
    static bool next_composition(Composition& x) {
        const int m = static_cast<int>(x.size());
        int j = m - 2;
        while (j >= 0 && x[static_cast<std::size_t>(j)] == 0) --j;
        if (j < 0) return false;
        std::int64_t suffix = 0;
        for (int k = j + 1; k < m; ++k) {
            suffix += x[static_cast<std::size_t>(k)];
            x[static_cast<std::size_t>(k)] = 0;
        }
        x[static_cast<std::size_t>(j)] -= 1;
        x[static_cast<std::size_t>(j) + 1] = suffix + 1;
        return true;
    }

    void require_member(const Composition& x) const {
        if (static_cast<int>(x.size()) != m_)
            throw std::invalid_argument("composition length does not match simplex arity");
        std::int64_t sum = 0;
        for (std::int64_t c : x) {
            if (c < 0) throw std::domain_error("composition entries must be non-negative");
            sum += c;
        }
        if (sum != n_)
            throw std::invalid_argument("composition level " + std::to_string(sum) +
                                        " does not match simplex level " + std::to_string(n_));
    }

private:
    std::uint64_t count(int parts, std::int64_t k) const {
        return counts_[static_cast<std::size_t>(parts)][static_cast<std::size_t>(k)];
    }

    int m_;
    std::int64_t n_;
    std::vector<std::vector<std::uint64_t>> counts_;
};

/// Materializes all of C_n in enumeration order. Memory cost size()*m.
inline std::vector<Composition> enumerate_simplex(int m, std::int64_t n) {
    SimplexIndex idx(m, n);
    std::vector<Composition> out;
    out.reserve(static_cast<std::size_t>(idx.size()));
    Composition x(static_cast<std::size_t>(m), 0);
    x[0] = n;
    out.push_back(x);
    while (SimplexIndex::next_composition(x)) out.push_back(x);
    return out;
}

}  // namespace polya
