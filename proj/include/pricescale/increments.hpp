#pragma once

#include "pricescale/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pricescale::increments {

/// Forward differences of consecutive n-hour bin means:
/// deltas[i] = mean(bin i+1) - mean(bin i), positive when prices rise.
struct IncrementSeries {
    std::size_t scale_n = 1;
    std::vector<double> deltas;
};

struct IncrementPair {
    double prev = 0.0;  // delta_{i-1}
    double curr = 0.0;  // delta_i
};

struct PairSet {
    std::vector<IncrementPair> pairs;
};

struct SlopeFit {
    double slope = 0.0;
    double slope_err = 0.0;
    std::size_t bins = 0;
};

/// Mean current increment per bin of preceding increment. Only occupied bins are
/// listed. Quadrant slopes regress mean_curr on mean_prev over bins holding at
/// least the minimum occupancy, selected by bin center sign and mean_curr sign.
struct BinnedCurve {
    std::vector<double> prev_bin_centers;
    std::vector<double> mean_prev;
    std::vector<double> mean_curr;
    std::vector<std::size_t> counts;
    double clip = 0.0;                    // bins span [-clip, clip]
    std::optional<SlopeFit> q4_slope;     // prev > 0, mean_curr < 0
    std::optional<SlopeFit> q1_slope;     // prev > 0, mean_curr > 0
};

struct ScenarioCounts {
    std::size_t rise_then_fall = 0;     // I
    std::size_t stable_then_rise = 0;   // II
    std::size_t fall_then_stable = 0;   // III
    std::size_t rise_then_rise = 0;     // IV
    std::size_t unclassified = 0;
    double epsilon = 0.0;

    std::size_t classified() const noexcept {
        return rise_then_fall + stable_then_rise + fall_then_stable + rise_then_rise;
    }
    std::size_t total() const noexcept { return classified() + unclassified; }
    friend bool operator==(const ScenarioCounts&, const ScenarioCounts&) = default;
};

struct BinningOptions {
    std::size_t bin_count = 40;
    std::size_t min_occupancy = 10;
    double clip_quantile = 0.995;
};

/// Requires 1 <= n <= N/4 and at least three complete bins.
IncrementSeries multiscale_increments(const PriceSeries& series, std::size_t n);

PairSet lag_pairs(const IncrementSeries& incs);

/// Requires at least 100 pairs and bin_count >= 10.
BinnedCurve binned_regression(const PairSet& pairs, const BinningOptions& options = {});

ScenarioCounts classify_scenarios(const PairSet& pairs, double epsilon);

/// Half the median absolute deviation of the increments. Falls back to half the
/// mean absolute deviation from the median when most increments are identical,
/// and to a tiny positive floor for an all-constant series.
double default_epsilon(const IncrementSeries& incs);

}  // namespace pricescale::increments
