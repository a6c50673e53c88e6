#include "cevdetect/cev_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cevdetect {

namespace {

// ceil(v) for a fractional order-statistic index. p*k carries rounding error
// (0.3*10 == 3.0000000000000004), so values within 1e-9 of an integer snap to it.
std::size_t ceil_index(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(v));
}

// a-th smallest (1-based) of values.
double order_stat(std::vector<double>& values, std::size_t a) {
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(a - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

void require_pairs(const RankVector& ranks) {
    if (ranks.k() < 2) throw std::invalid_argument("Kendall's tau requires k >= 2");
}

// 4C/(k(k-1)) - 1 written as (C - D)/P with P = k(k-1)/2 pairs and D = P - C,
// so that swapping C and D flips the sign exactly.
double tau_from_count(std::uint64_t concordant, std::size_t k) {
    const auto pairs = static_cast<std::int64_t>(k) * static_cast<std::int64_t>(k - 1) / 2;
    const auto c = static_cast<std::int64_t>(concordant);
    return static_cast<double>(c - (pairs - c)) / static_cast<double>(pairs);
}

}  // namespace

double hillish(const RankVector& ranks) {
    const auto k = ranks.k();
    const double kd = static_cast<double>(k);
    double sum = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
        sum += std::log(kd / static_cast<double>(ranks[j - 1])) * std::log(kd / static_cast<double>(j));
    }
    return sum / kd;
}

std::pair<double, double> hillish_pair(const ConcomitantView& view, std::size_t k) {
    if (k < 2) throw std::invalid_argument("hillish_pair requires k >= 2");
    const double direct = hillish(ranks_topk(view, k));
    const double negated = hillish(ranks_topk(view.negated(), k));
    return {direct, negated};
}

MaybeReal pickandsish(const ConcomitantView& view, std::size_t k, double p) {
    if (k < 4) throw std::invalid_argument("Pickandsish requires k >= 4");
    if (k > view.size()) throw std::out_of_range("k=" + std::to_string(k) + " exceeds n");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Pickandsish requires 0 < p < 1");

    const double kd = static_cast<double>(k);
    const std::size_t full_idx = ceil_index(p * kd);
    const std::size_t quarter_idx = std::max<std::size_t>(1, ceil_index(p * kd / 2.0));
    const std::size_t half_size = ceil_index(kd / 2.0);

    std::vector<double> top(view.x_star.begin(), view.x_star.begin() + static_cast<std::ptrdiff_t>(k));
    const double x_full = order_stat(top, full_idx);
    const double x_quarter = order_stat(top, quarter_idx);

    std::vector<double> half(view.x_star.begin(), view.x_star.begin() + static_cast<std::ptrdiff_t>(half_size));
    const double x_half = order_stat(half, std::min(quarter_idx, half_size));

    const double denom = x_full - x_quarter;
    if (denom == 0.0) return std::nullopt;
    return (x_full - x_half) / denom;
}

std::uint64_t concordant_pairs(const RankVector& ranks) {
    const auto k = ranks.k();
    // Fenwick tree over rank values 1..k; tree[r] counts earlier ranks.
    std::vector<std::uint64_t> tree(k + 1, 0);
    std::uint64_t concordant = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t r = ranks[j];
        for (std::size_t i = r - 1; i > 0; i -= i & (~i + 1)) concordant += tree[i];
        for (std::size_t i = r; i <= k; i += i & (~i + 1)) ++tree[i];
    }
    return concordant;
}

std::uint64_t concordant_pairs_bruteforce(const RankVector& ranks) {
    const auto k = ranks.k();
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (ranks[i] < ranks[j]) ++count;
        }
    }
    return count;
}

double kendall_tau(const RankVector& ranks) {
    require_pairs(ranks);
    return tau_from_count(concordant_pairs(ranks), ranks.k());
}

double kendall_tau_bruteforce(const RankVector& ranks) {
    require_pairs(ranks);
    return tau_from_count(concordant_pairs_bruteforce(ranks), ranks.k());
}

HillishDecomposition hillish_integral_identity(const RankVector& ranks) {
    if (ranks.k() < 2) throw std::invalid_argument("decomposition requires k >= 2");
    const auto k = ranks.k();
    const double kd = static_cast<double>(k);
    double integral = 0.0;
    double rank_logs = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double lr = std::log(kd / static_cast<double>(ranks[i - 1]));
        integral += lr * std::log((kd + 1.0) / static_cast<double>(i));
        rank_logs += lr;
    }
    return {integral / kd, std::log((kd + 1.0) / kd) * rank_logs / kd};
}

std::vector<double> TraceBundle::p_values() const {
    std::vector<double> out;
    out.reserve(pickandsish.size());
    for (const auto& t : pickandsish) out.push_back(t.p);
    return out;
}

TraceBundle compute_traces(const BivariateSample& sample, const KGrid& kgrid,
                           std::span<const double> p_values) {
    const auto n = sample.size();
    if (kgrid.max() > n) {
        throw std::out_of_range("k-grid maximum " + std::to_string(kgrid.max()) +
                                " exceeds sample size " + std::to_string(n));
    }
    for (double p : p_values) {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p probes must lie in (0,1)");
    }

    const ConcomitantView view = build_view(sample);
    const ConcomitantView neg_view = view.negated();
    const auto g = kgrid.size();

    TraceBundle bundle{.sample_size = n, .kgrid = kgrid, .hillish = {}, .hillish_neg = {},
                       .pickandsish = {}, .kendall = {}};
    bundle.hillish.resize(g);
    bundle.hillish_neg.resize(g);
    bundle.kendall.resize(g);
    for (double p : p_values) bundle.pickandsish.push_back({p, std::vector<MaybeReal>(g)});

    for (std::size_t gi = 0; gi < g; ++gi) {
        const auto k = kgrid[gi];
        const RankVector ranks = ranks_topk(view, k);
        bundle.hillish[gi] = hillish(ranks);
        bundle.hillish_neg[gi] = hillish(ranks_topk(neg_view, k));
        bundle.kendall[gi] = kendall_tau(ranks);
        if (k >= 4) {
            for (auto& trace : bundle.pickandsish) trace.values[gi] = pickandsish(view, k, trace.p);
        }
    }
    return bundle;
}

}  // namespace cevdetect
