#include "cevdetect/marginal_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cevdetect {

namespace {

std::vector<double> descending(std::span<const double> z) {
    std::vector<double> out(z.begin(), z.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

// The *_sorted variants take Z_(1) >= ... >= Z_(n); index i below is 1-based.

double hill_sorted(const std::vector<double>& zd, std::size_t k) {
    if (k < 1 || k + 1 > zd.size()) throw std::out_of_range("Hill requires 1 <= k <= n-1");
    const double threshold = zd[k];
    if (!(threshold > 0.0)) throw std::domain_error("Hill requires positive tail data");
    const double log_threshold = std::log(threshold);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(zd[i]) - log_threshold;
    return sum / static_cast<double>(k);
}

MaybeReal pickands_sorted(const std::vector<double>& zd, std::size_t k) {
    if (k < 1 || 4 * k > zd.size()) throw std::out_of_range("Pickands requires 1 <= k and 4k <= n");
    const double upper = zd[k - 1] - zd[2 * k - 1];
    const double lower = zd[2 * k - 1] - zd[4 * k - 1];
    if (lower == 0.0) return std::nullopt;
    const double ratio = upper / lower;
    if (!(ratio > 0.0)) return std::nullopt;
    return std::log(ratio) / std::numbers::ln2;
}

MaybeReal moment_sorted(const std::vector<double>& zd, std::size_t k) {
    if (k < 1 || k + 1 > zd.size()) throw std::out_of_range("moment estimator requires 1 <= k <= n-1");
    const double threshold = zd[k];
    if (!(threshold > 0.0)) throw std::domain_error("moment estimator requires positive tail data");
    const double log_threshold = std::log(threshold);
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = std::log(zd[i]) - log_threshold;
        m1 += d;
        m2 += d * d;
    }
    const double kd = static_cast<double>(k);
    m1 /= kd;
    m2 /= kd;
    if (m2 == 0.0) return std::nullopt;
    const double shape = 1.0 - m1 * m1 / m2;
    if (shape == 0.0) return std::nullopt;
    return m1 + 1.0 - 0.5 / shape;
}

}  // namespace

double hill_estimator(std::span<const double> z, std::size_t k) {
    return hill_sorted(descending(z), k);
}

MaybeReal pickands_estimator(std::span<const double> z, std::size_t k) {
    return pickands_sorted(descending(z), k);
}

MaybeReal moment_estimator(std::span<const double> z, std::size_t k) {
    return moment_sorted(descending(z), k);
}

std::vector<QQPoint> qq_exponential(std::span<const double> z, std::size_t k) {
    if (k < 1 || k > z.size()) throw std::out_of_range("QQ plot requires 1 <= k <= n");
    const auto zd = descending(z);
    if (!(zd[k - 1] > 0.0)) throw std::domain_error("QQ plot requires positive data in the top k");
    std::vector<QQPoint> points;
    points.reserve(k);
    const double denom = static_cast<double>(k) + 1.0;
    for (std::size_t i = k; i >= 1; --i) {
        points.push_back({-std::log(static_cast<double>(i) / denom), std::log(zd[i - 1])});
    }
    return points;
}

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::Hill: return "hill";
        case Estimator::Pickands: return "pickands";
        case Estimator::Moment: return "moment";
    }
    return "unknown";
}

EVEstimateTrace estimate_trace(std::span<const double> z, const KGrid& kgrid, Estimator estimator) {
    const auto zd = descending(z);
    EVEstimateTrace trace{kgrid, estimator, std::vector<MaybeReal>(kgrid.size())};
    for (std::size_t gi = 0; gi < kgrid.size(); ++gi) {
        const auto k = kgrid[gi];
        try {
            switch (estimator) {
                case Estimator::Hill: trace.values[gi] = hill_sorted(zd, k); break;
                case Estimator::Pickands: trace.values[gi] = pickands_sorted(zd, k); break;
                case Estimator::Moment: trace.values[gi] = moment_sorted(zd, k); break;
            }
        } catch (const std::out_of_range&) {
            trace.values[gi] = std::nullopt;
        } catch (const std::domain_error&) {
            trace.values[gi] = std::nullopt;
        }
    }
    return trace;
}

}  // namespace cevdetect
