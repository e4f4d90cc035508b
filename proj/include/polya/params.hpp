#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace polya {

/// Chain state: counts per color (stock), summing to the current level n.
using Composition = std::vector<std::int64_t>;

/// Level of a composition, n = sum of counts.
inline std::int64_t level(const Composition& x) {
    return std::accumulate(x.begin(), x.end(), std::int64_t{0});
}

/// Symmetric-prior urn parameters: per-color weight alpha, m colors.
/// The total weight theta = m*alpha is always derived, never stored.
class ModelParams {
public:
    ModelParams(double alpha, int m) : alpha_(alpha), m_(m) {
        if (!(alpha > 0.0))
            throw std::domain_error("ModelParams: alpha must be positive");
        if (m < 1)
            throw std::domain_error("ModelParams: need at least one color");
    }

    double alpha() const { return alpha_; }
    int m() const { return m_; }
    double theta() const { return static_cast<double>(m_) * alpha_; }

private:
    double alpha_;
    int m_;
};

/// Throws unless x has exactly m non-negative entries.
inline void require_compatible(const ModelParams& params, const Composition& x) {
    if (static_cast<int>(x.size()) != params.m())
        throw std::invalid_argument("composition has " + std::to_string(x.size()) +
                                    " entries, expected " + std::to_string(params.m()));
    for (std::int64_t c : x)
        if (c < 0) throw std::domain_error("composition entries must be non-negative");
}

/// Throws unless both states live on the same set of colors.
inline void require_compatible(const Composition& a, const Composition& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("compositions have " + std::to_string(a.size()) + " and " +
                                    std::to_string(b.size()) + " entries");
}

inline void require_color(const ModelParams& params, int i) {
    if (i < 0 || i >= params.m())
        throw std::out_of_range("color id " + std::to_string(i) + " out of range [0," +
                                std::to_string(params.m()) + ")");
}

}  // namespace polya
