#include "cevdetect/rank_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cevdetect {

BivariateSample::BivariateSample(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) {
        throw std::invalid_argument("sample columns differ in length: " +
                                    std::to_string(xs_.size()) + " vs " +
                                    std::to_string(ys_.size()));
    }
    if (xs_.empty()) throw std::invalid_argument("empty input");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
            throw std::invalid_argument("non-finite observation at index " + std::to_string(i));
        }
    }
}

BivariateSample BivariateSample::negated_x() const {
    std::vector<double> neg(xs_.size());
    std::transform(xs_.begin(), xs_.end(), neg.begin(), [](double v) { return -v; });
    return BivariateSample(std::move(neg), ys_);
}

ConcomitantView ConcomitantView::negated() const {
    ConcomitantView out = *this;
    for (double& v : out.x_star) v = -v;
    return out;
}

RankVector::RankVector(std::vector<std::uint32_t> ranks) : ranks_(std::move(ranks)) {
    if (ranks_.empty()) throw std::invalid_argument("rank vector must have k >= 1");
    const auto k = ranks_.size();
    for (auto r : ranks_) {
        if (r < 1 || r > k) {
            throw std::invalid_argument("rank " + std::to_string(r) + " outside [1, " +
                                        std::to_string(k) + "]");
        }
    }
}

ConcomitantView build_view(const BivariateSample& sample) {
    const auto n = sample.size();
    if (n == 0) throw std::invalid_argument("empty input");
    const auto xs = sample.xs();
    const auto ys = sample.ys();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ys[a] > ys[b]; });

    ConcomitantView view;
    view.y_desc.reserve(n);
    view.x_star.reserve(n);
    for (auto idx : order) {
        view.y_desc.push_back(ys[idx]);
        view.x_star.push_back(xs[idx]);
    }
    return view;
}

namespace {

void check_k(const ConcomitantView& view, std::size_t k) {
    if (k < 1 || k > view.size()) {
        throw std::out_of_range("k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(view.size()) + "]");
    }
}

}  // namespace

RankVector ranks_topk(const ConcomitantView& view, std::size_t k) {
    check_k(view, k);
    const std::span<const double> prefix(view.x_star.data(), k);
    std::vector<double> sorted(prefix.begin(), prefix.end());
    std::sort(sorted.begin(), sorted.end());

    // upper_bound gives the count of values <= x, i.e. the maximal rank on ties.
    std::vector<std::uint32_t> ranks(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto pos = std::upper_bound(sorted.begin(), sorted.end(), prefix[i]);
        ranks[i] = static_cast<std::uint32_t>(pos - sorted.begin());
    }
    return RankVector(std::move(ranks));
}

RankVector ranks_topk_direct(const ConcomitantView& view, std::size_t k) {
    check_k(view, k);
    std::vector<std::uint32_t> ranks(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t count = 0;
        for (std::size_t l = 0; l < k; ++l) {
            if (view.x_star[l] <= view.x_star[i]) ++count;
        }
        ranks[i] = count;
    }
    return RankVector(std::move(ranks));
}

double empirical_L(const RankVector& ranks, double x, double y) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("empirical_L: x must lie in [0,1]");
    if (!(y >= 1.0)) throw std::invalid_argument("empirical_L: y must be >= 1");
    const auto k = ranks.k();
    const double kd = static_cast<double>(k);
    std::size_t count = 0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double u = static_cast<double>(ranks[i - 1]) / kd;
        const double w = (kd + 1.0) / static_cast<double>(i);
        if (u <= x && w > y) ++count;
    }
    return static_cast<double>(count) / kd;
}

double empirical_copula(const RankVector& ranks, double x, double y) {
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
        throw std::invalid_argument("empirical_copula: arguments must lie in [0,1]");
    }
    const auto k = ranks.k();
    const double kd = static_cast<double>(k);
    std::size_t count = 0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double u = static_cast<double>(ranks[i - 1]) / kd;
        const double v = static_cast<double>(i) / kd;
        if (u <= x && v <= y) ++count;
    }
    return static_cast<double>(count) / kd;
}

}  // namespace cevdetect
