#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cevdetect {

/// Paired observations (x_i, y_i). Y is the conditioning variable whose
/// upper tail drives every statistic; X supplies the concomitants.
class BivariateSample {
public:
    /// Throws std::invalid_argument on length mismatch, empty input, or a
    /// non-finite entry.
    BivariateSample(std::vector<double> xs, std::vector<double> ys);

    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const double> ys() const noexcept { return ys_; }
    std::size_t size() const noexcept { return xs_.size(); }

    /// The sample (-x_i, y_i).
    BivariateSample negated_x() const;

    friend bool operator==(const BivariateSample&, const BivariateSample&) = default;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

enum class TiePolicy { StableByInputIndex };

/// Y sorted descending with the paired X values carried along.
/// y_desc[0] is the largest Y; x_star[i] is the concomitant of y_desc[i].
struct ConcomitantView {
    std::vector<double> y_desc;
    std::vector<double> x_star;
    TiePolicy tie_policy = TiePolicy::StableByInputIndex;

    std::size_t size() const noexcept { return y_desc.size(); }

    /// Same ordering with every concomitant negated, i.e. the view of (-X, Y).
    ConcomitantView negated() const;
};

/// Ranks R_1..R_k of the first k concomitants, each counted as
/// #{l <= k : x*_l <= x*_i} so tied values share the maximal rank.
class RankVector {
public:
    /// Validates 1 <= R_i <= k where k = ranks.size() >= 1.
    explicit RankVector(std::vector<std::uint32_t> ranks);

    std::size_t k() const noexcept { return ranks_.size(); }
    std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }
    std::uint32_t operator[](std::size_t i) const noexcept { return ranks_[i]; }

    friend bool operator==(const RankVector&, const RankVector&) = default;

private:
    std::vector<std::uint32_t> ranks_;
};

/// Sorts Y descending; ties in Y keep input order.
ConcomitantView build_view(const BivariateSample& sample);

/// O(k log k) ranks of x_star[0..k).
RankVector ranks_topk(const ConcomitantView& view, std::size_t k);

/// O(k^2) literal count. Reference path for tests and tiny inputs.
RankVector ranks_topk_direct(const ConcomitantView& view, std::size_t k);

/// (1/k) #{i : R_i/k <= x and (k+1)/i > y}, for x in [0,1] and y >= 1.
double empirical_L(const RankVector& ranks, double x, double y);

/// (1/k) #{i : R_i/k <= x and i/k <= y}, for x, y in [0,1].
double empirical_copula(const RankVector& ranks, double x, double y);

}  // namespace cevdetect
