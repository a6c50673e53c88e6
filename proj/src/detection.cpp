#include "cevdetect/detection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cevdetect/number_format.hpp"

namespace cevdetect {

namespace {

// Linear interpolation between order statistics (the usual "type 7" rule).
double sorted_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct WindowStats {
    std::size_t start = 0;
    MaybeReal level;
    MaybeReal iqr;
    MaybeReal dispersion;
    std::size_t undefined = 0;
    bool eligible = false;
};

bool near(const StabilityReport& r, double target, double eps) {
    return r.stable && r.level && std::abs(*r.level - target) <= eps;
}

}  // namespace

void DetectionConfig::validate() const {
    if (!(admissible_lo_frac >= 0.0 && admissible_lo_frac < admissible_hi_frac))
        throw std::invalid_argument("admissible k fractions must satisfy 0 <= lo < hi");
    if (!(window_frac > 0.0 && window_frac <= 1.0)) throw std::invalid_argument("window fraction must lie in (0,1]");
    if (min_window < 2) throw std::invalid_argument("minimum window must be at least 2 grid points");
    if (!(dispersion_rank >= 0.0 && dispersion_ratio >= 0.0))
        throw std::invalid_argument("dispersion thresholds must be >= 0");
    if (!(max_undefined_frac >= 0.0 && max_undefined_frac <= 1.0))
        throw std::invalid_argument("undefined fraction must lie in [0,1]");
    if (!(eps_hillish >= 0.0 && eps_pickandsish >= 0.0 && eps_kendall >= 0.0))
        throw std::invalid_argument("tolerances must be >= 0");
}

StabilityReport assess_stability(std::string_view statistic_id, std::span<const MaybeReal> trace,
                                 const KGrid& kgrid, std::size_t sample_size, StatisticScale scale,
                                 const DetectionConfig& config) {
    config.validate();
    if (trace.size() != kgrid.size()) throw std::invalid_argument("trace length differs from grid size");

    const double n = static_cast<double>(sample_size);
    std::vector<std::size_t> admissible;
    for (std::size_t i = 0; i < kgrid.size(); ++i) {
        const double k = static_cast<double>(kgrid[i]);
        if (k >= config.admissible_lo_frac * n && k <= config.admissible_hi_frac * n) admissible.push_back(i);
    }
    const std::size_t m = admissible.size();
    const auto width = std::max(config.min_window,
                                static_cast<std::size_t>(std::ceil(config.window_frac * static_cast<double>(m) - 1e-9)));
    if (width > m) throw std::invalid_argument("window wider than grid");

    const double threshold = config.dispersion_threshold(scale);
    std::vector<WindowStats> windows;
    std::vector<double> vals;
    for (std::size_t s = 0; s + width <= m; ++s) {
        WindowStats w;
        w.start = s;
        vals.clear();
        for (std::size_t j = s; j < s + width; ++j) {
            const auto& v = trace[admissible[j]];
            if (v) vals.push_back(*v);
            else ++w.undefined;
        }
        if (!vals.empty()) {
            std::sort(vals.begin(), vals.end());
            w.level = sorted_quantile(vals, 0.5);
            w.iqr = sorted_quantile(vals, 0.75) - sorted_quantile(vals, 0.25);
            w.dispersion = scale == StatisticScale::Rank ? *w.iqr : *w.iqr / std::max(1.0, std::abs(*w.level));
        }
        w.eligible = w.dispersion &&
                     static_cast<double>(w.undefined) <= config.max_undefined_frac * static_cast<double>(width);
        windows.push_back(w);
    }

    // Eligible windows first, then by dispersion; ties go to the smallest k.
    auto better = [](const WindowStats& a, const WindowStats& b) {
        if (a.eligible != b.eligible) return a.eligible;
        if (a.dispersion.has_value() != b.dispersion.has_value()) return a.dispersion.has_value();
        if (a.dispersion && *a.dispersion != *b.dispersion) return *a.dispersion < *b.dispersion;
        return a.start < b.start;
    };
    const auto best = *std::min_element(windows.begin(), windows.end(), better);

    StabilityReport report;
    report.statistic_id = std::string(statistic_id);
    report.k_lo = kgrid[admissible[best.start]];
    report.k_hi = kgrid[admissible[best.start + width - 1]];
    report.level = best.level;
    report.dispersion = best.dispersion;
    report.iqr = best.iqr;
    report.undefined_count = best.undefined;
    report.stable = best.eligible && *best.dispersion <= threshold;
    return report;
}

StabilityReport assess_stability(std::string_view statistic_id, std::span<const double> trace,
                                 const KGrid& kgrid, std::size_t sample_size, StatisticScale scale,
                                 const DetectionConfig& config) {
    std::vector<MaybeReal> wrapped(trace.begin(), trace.end());
    return assess_stability(statistic_id, wrapped, kgrid, sample_size, scale, config);
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::NotCev: return "NOT_CEV";
        case Verdict::CevProduct: return "CEV_PRODUCT";
        case Verdict::CevNonproduct: return "CEV_NONPRODUCT";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

std::string pickandsish_id(double p) { return "pickandsish_p" + format_real(p); }

namespace {

void require_two_probes(const TraceBundle& bundle) {
    const auto ps = bundle.p_values();
    if (std::set<double>(ps.begin(), ps.end()).size() < 2)
        throw std::invalid_argument("product check requires at least two distinct p values");
}

}  // namespace

std::vector<StabilityReport> assess_bundle(const TraceBundle& bundle, const DetectionConfig& config) {
    const auto& grid = bundle.kgrid;
    const auto n = bundle.sample_size;
    std::vector<StabilityReport> reports;
    reports.push_back(assess_stability("hillish", std::span<const double>(bundle.hillish), grid, n,
                                       StatisticScale::Rank, config));
    reports.push_back(assess_stability("hillish_neg", std::span<const double>(bundle.hillish_neg), grid, n,
                                       StatisticScale::Rank, config));
    for (const auto& trace : bundle.pickandsish) {
        reports.push_back(assess_stability(pickandsish_id(trace.p), std::span<const MaybeReal>(trace.values), grid, n,
                                           StatisticScale::Ratio, config));
    }
    reports.push_back(assess_stability("kendall", std::span<const double>(bundle.kendall), grid, n,
                                       StatisticScale::Rank, config));
    return reports;
}

DetectionVerdict product_verdict(const TraceBundle& bundle, const std::vector<StabilityReport>& reports,
                                 const DetectionConfig& config) {
    require_two_probes(bundle);
    const std::size_t probes = bundle.pickandsish.size();
    if (reports.size() != probes + 3) throw std::invalid_argument("one stability report per statistic required");

    const auto& hill = reports[0];
    const auto& hill_neg = reports[1];
    const auto& kendall = reports.back();
    const std::span<const StabilityReport> pick(reports.data() + 2, probes);

    DetectionVerdict out;
    out.evidence = reports;
    out.thresholds = config;

    const bool any_stable = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.stable; });
    if (!any_stable) {
        out.verdict = Verdict::NotCev;
        return out;
    }

    enum class Vote { None, Product, Nonproduct };
    Vote hill_vote = Vote::None;
    if (hill.stable && hill_neg.stable) {
        hill_vote = near(hill, 1.0, config.eps_hillish) && near(hill_neg, 1.0, config.eps_hillish) ? Vote::Product
                                                                                                   : Vote::Nonproduct;
    }
    Vote pick_vote = Vote::None;
    if (std::all_of(pick.begin(), pick.end(), [](const auto& r) { return r.stable; })) {
        pick_vote = std::all_of(pick.begin(), pick.end(),
                                [&](const auto& r) { return near(r, 0.0, config.eps_pickandsish); })
                        ? Vote::Product
                        : Vote::Nonproduct;
    }

    if (hill_vote == Vote::Product && pick_vote == Vote::Product && near(kendall, 0.0, config.eps_kendall)) {
        out.verdict = Verdict::CevProduct;
    } else if (hill_vote == Vote::Nonproduct && kendall.stable && pick_vote != Vote::Product) {
        out.verdict = Verdict::CevNonproduct;
    } else {
        out.verdict = Verdict::Inconclusive;
    }
    return out;
}

DetectionVerdict product_verdict(const TraceBundle& bundle, const DetectionConfig& config) {
    require_two_probes(bundle);
    return product_verdict(bundle, assess_bundle(bundle, config), config);
}

}  // namespace cevdetect
