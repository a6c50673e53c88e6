#include "cevdetect/kgrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cevdetect {

KGrid::KGrid(std::vector<std::size_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("k-grid must be nonempty");
    if (values_.front() < 2) throw std::invalid_argument("k-grid values must be >= 2");
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] <= values_[i - 1]) {
            throw std::invalid_argument("k-grid must be strictly increasing (at position " +
                                        std::to_string(i) + ")");
        }
    }
}

KGrid KGrid::spaced(std::size_t kmin, std::size_t kmax, std::size_t count, GridSpacing spacing) {
    if (kmin < 2) throw std::invalid_argument("kmin must be >= 2");
    if (kmax < kmin) throw std::invalid_argument("kmax must be >= kmin");
    if (count == 0) throw std::invalid_argument("k count must be >= 1");
    if (count == 1 || kmin == kmax) return KGrid({kmax});

    std::vector<std::size_t> out;
    out.reserve(count);
    const double lo = static_cast<double>(kmin);
    const double hi = static_cast<double>(kmax);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        double v = spacing == GridSpacing::Log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                               : lo + t * (hi - lo);
        auto k = static_cast<std::size_t>(std::llround(v));
        k = std::clamp(k, kmin, kmax);
        if (out.empty() || k > out.back()) out.push_back(k);
    }
    return KGrid(std::move(out));
}

KGrid KGrid::range(std::size_t kmin, std::size_t kmax) {
    if (kmin < 2 || kmax < kmin) throw std::invalid_argument("invalid k range");
    std::vector<std::size_t> out;
    out.reserve(kmax - kmin + 1);
    for (auto k = kmin; k <= kmax; ++k) out.push_back(k);
    return KGrid(std::move(out));
}

KGrid KGrid::default_for(std::size_t n) {
    if (n < 2) throw std::invalid_argument("need n >= 2 for a k-grid");
    const std::size_t kmax = std::max<std::size_t>(2, n / 10);
    const std::size_t kmin = std::min<std::size_t>(10, kmax);
    return spaced(kmin, std::min(kmax, n), 50, GridSpacing::Log);
}

KGrid KGrid::marginal_default_for(std::size_t n) {
    if (n < 2) throw std::invalid_argument("need n >= 2 for a k-grid");
    const std::size_t kmax = std::max<std::size_t>(2, n / 4);
    return spaced(2, std::min(kmax, n), 50, GridSpacing::Log);
}

}  // namespace cevdetect
