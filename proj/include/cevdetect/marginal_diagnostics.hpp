#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cevdetect/kgrid.hpp"

namespace cevdetect {

// Univariate extreme-value-index estimators on the descending order
// statistics Z_(1) >= Z_(2) >= ... >= Z_(n). Each depends on z only
// through those order statistics.

/// (1/k) sum_{i=1..k} log(Z_(i) / Z_(k+1)). Estimates 1/alpha for a
/// heavy tail with index alpha. Requires k+1 <= n and Z_(k+1) > 0.
double hill_estimator(std::span<const double> z, std::size_t k);

/// (1/log 2) log[(Z_(k) - Z_(2k)) / (Z_(2k) - Z_(4k))]. Requires 4k <= n;
/// undefined when Z_(2k) == Z_(4k) or the ratio is not positive.
MaybeReal pickands_estimator(std::span<const double> z, std::size_t k);

/// Dekkers-Einmahl-de Haan moment estimator
///   M1 + 1 - 1/2 (1 - M1^2/M2)^{-1},  Mj = (1/k) sum (log Z_(i) - log Z_(k+1))^j.
/// Requires k+1 <= n and Z_(k+1) > 0; undefined when M2 == 0 or M1^2 == M2.
MaybeReal moment_estimator(std::span<const double> z, std::size_t k);

struct QQPoint {
    double exponential_quantile;  ///< -log(i/(k+1))
    double log_value;             ///< log Z_(i)
};

/// Exponential QQ plot of the top k log order statistics, i = 1..k.
/// A heavy tail with index alpha shows as a line of slope 1/alpha.
std::vector<QQPoint> qq_exponential(std::span<const double> z, std::size_t k);

enum class Estimator { Hill, Pickands, Moment };

std::string_view to_string(Estimator e) noexcept;

struct EVEstimateTrace {
    KGrid kgrid;
    Estimator estimator;
    std::vector<MaybeReal> values;
};

/// Evaluates one estimator over a grid. k values the estimator cannot use
/// (out of range, nonpositive tail data, degenerate moments) are left
/// undefined instead of failing the whole trace.
EVEstimateTrace estimate_trace(std::span<const double> z, const KGrid& kgrid, Estimator estimator);

}  // namespace cevdetect
