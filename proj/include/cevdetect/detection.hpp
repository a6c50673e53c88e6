#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cevdetect/cev_statistics.hpp"
#include "cevdetect/kgrid.hpp"

namespace cevdetect {

/// Rank statistics (Hillish, Kendall) are judged on the raw window IQR;
/// ratio statistics (Pickandsish) on IQR / max(1, |median|).
enum class StatisticScale { Rank, Ratio };

struct DetectionConfig {
    double admissible_lo_frac = 0.05;   ///< admissible k >= lo_frac * n
    double admissible_hi_frac = 0.3;    ///< admissible k <= hi_frac * n
    double window_frac = 0.5;           ///< window width as a fraction of the admissible points
    std::size_t min_window = 3;
    double dispersion_rank = 0.1;
    double dispersion_ratio = 0.3;
    double max_undefined_frac = 0.2;
    double eps_hillish = 0.25;
    double eps_pickandsish = 0.5;
    double eps_kendall = 0.25;

    double dispersion_threshold(StatisticScale scale) const {
        return scale == StatisticScale::Rank ? dispersion_rank : dispersion_ratio;
    }
    void validate() const;
};

struct StabilityReport {
    std::string statistic_id;
    std::size_t k_lo = 0;
    std::size_t k_hi = 0;
    MaybeReal level;        ///< window median; empty when the window has no defined entry
    MaybeReal dispersion;   ///< scaled IQR compared against the threshold
    MaybeReal iqr;          ///< raw window IQR
    std::size_t undefined_count = 0;
    bool stable = false;
};

/// Slides a window over the admissible grid points and reports the window
/// of minimum dispersion. Windows with more than max_undefined_frac
/// undefined entries are never stable and are only reported when no other
/// window qualifies. Throws std::invalid_argument("window wider than grid")
/// when the admissible part of the grid is narrower than the window.
StabilityReport assess_stability(std::string_view statistic_id, std::span<const MaybeReal> trace,
                                 const KGrid& kgrid, std::size_t sample_size, StatisticScale scale,
                                 const DetectionConfig& config);

StabilityReport assess_stability(std::string_view statistic_id, std::span<const double> trace,
                                 const KGrid& kgrid, std::size_t sample_size, StatisticScale scale,
                                 const DetectionConfig& config);

enum class Verdict { NotCev, CevProduct, CevNonproduct, Inconclusive };

std::string_view to_string(Verdict v) noexcept;

struct DetectionVerdict {
    Verdict verdict = Verdict::Inconclusive;
    /// hillish, hillish_neg, pickandsish_p<p> per probe, kendall.
    std::vector<StabilityReport> evidence;
    DetectionConfig thresholds;
};

/// One report per statistic of the bundle, in evidence order.
std::vector<StabilityReport> assess_bundle(const TraceBundle& bundle, const DetectionConfig& config);

/// Verdict from precomputed reports (as returned by assess_bundle).
///   CEV_PRODUCT     Hillish pair stable within eps_hillish of 1, every
///                   Pickandsish probe stable within eps_pickandsish of 0,
///                   and Kendall stable within eps_kendall of 0.
///   CEV_NONPRODUCT  Hillish pair stable with a level off 1, Kendall stable,
///                   and Pickandsish not stable at 0.
///   NOT_CEV         nothing stable.
///   INCONCLUSIVE    otherwise.
/// Throws std::invalid_argument with fewer than two distinct probes.
DetectionVerdict product_verdict(const TraceBundle& bundle, const std::vector<StabilityReport>& reports,
                                 const DetectionConfig& config);

DetectionVerdict product_verdict(const TraceBundle& bundle, const DetectionConfig& config);

/// "pickandsish_p0.3" etc.
std::string pickandsish_id(double p);

}  // namespace cevdetect
