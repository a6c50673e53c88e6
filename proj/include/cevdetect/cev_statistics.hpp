#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cevdetect/kgrid.hpp"
#include "cevdetect/rank_core.hpp"

namespace cevdetect {

/// (1/k) sum_{j=1..k} log(k/R_j) log(k/j), natural logs, summed in index order.
double hillish(const RankVector& ranks);

/// Hillish on (X, Y) and on (-X, Y). The second re-ranks the negated
/// concomitants, so ties are handled the same way as the first.
std::pair<double, double> hillish_pair(const ConcomitantView& view, std::size_t k);

/// Ratio of differences of concomitant order statistics:
///
///   (X*_{ceil(pk):k} - X*_{ceil(pk/2):ceil(k/2)}) / (X*_{ceil(pk):k} - X*_{ceil(pk/2):k})
///
/// where X*_{a:b} is the a-th smallest of the first b concomitants.
/// Returns nullopt when the denominator is exactly zero.
/// Throws for k < 4, k > n, or p outside (0,1).
MaybeReal pickandsish(const ConcomitantView& view, std::size_t k, double p);

/// Number of pairs i < j with R_i < R_j, by inversion counting over a
/// binary indexed tree. O(k log k).
std::uint64_t concordant_pairs(const RankVector& ranks);

/// Same count by the O(k^2) double loop.
std::uint64_t concordant_pairs_bruteforce(const RankVector& ranks);

/// 4/(k(k-1)) * #{i<j : R_i < R_j} - 1. Requires k >= 2.
double kendall_tau(const RankVector& ranks);

/// Literal double-loop transcription of kendall_tau; testing oracle.
double kendall_tau_bruteforce(const RankVector& ranks);

/// Integral form of Hillish and its correction term.
struct HillishDecomposition {
    double integral;    ///< (1/k) sum log(k/R_i) log((k+1)/i)
    double correction;  ///< log((k+1)/k) (1/k) sum log(k/R_i)
};

/// integral == hillish(ranks) + correction up to rounding.
HillishDecomposition hillish_integral_identity(const RankVector& ranks);

struct PickandsishTrace {
    double p;
    std::vector<MaybeReal> values;
};

/// Every statistic evaluated at each k of a grid.
struct TraceBundle {
    std::size_t sample_size = 0;
    KGrid kgrid;
    std::vector<double> hillish;
    std::vector<double> hillish_neg;
    std::vector<PickandsishTrace> pickandsish;
    std::vector<double> kendall;

    std::vector<double> p_values() const;
};

inline const std::vector<double> kDefaultProbes{0.3, 0.6};

/// Builds the concomitant view once, then evaluates every statistic at each
/// grid k on the top-k prefix. Pickandsish entries for k < 4 are undefined.
/// Throws if the grid exceeds n or a probe lies outside (0,1).
TraceBundle compute_traces(const BivariateSample& sample, const KGrid& kgrid,
                           std::span<const double> p_values = kDefaultProbes);

}  // namespace cevdetect
