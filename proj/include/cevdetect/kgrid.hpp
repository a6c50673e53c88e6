#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cevdetect {

/// A statistic value that may be undefined at a given k (e.g. a zero
/// denominator). Traces keep the gap instead of dropping the entry.
using MaybeReal = std::optional<double>;

enum class GridSpacing { Linear, Log };

/// Strictly increasing tail sizes k_1 < ... < k_G, all >= 2.
class KGrid {
public:
    explicit KGrid(std::vector<std::size_t> values);

    /// `count` points between kmin and kmax inclusive, rounded to integers;
    /// duplicates after rounding are dropped, so the result may be shorter.
    static KGrid spaced(std::size_t kmin, std::size_t kmax, std::size_t count, GridSpacing spacing);

    /// Every integer in [kmin, kmax].
    static KGrid range(std::size_t kmin, std::size_t kmax);

    /// 50 log-spaced points in [10, floor(n/10)], clipped for small n.
    static KGrid default_for(std::size_t n);

    /// 50 log-spaced points in [2, floor(n/4)] for the univariate estimators.
    static KGrid marginal_default_for(std::size_t n);

    std::span<const std::size_t> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t max() const noexcept { return values_.back(); }

    friend bool operator==(const KGrid&, const KGrid&) = default;

private:
    std::vector<std::size_t> values_;
};

}  // namespace cevdetect
