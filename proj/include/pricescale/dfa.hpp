#pragma once

#include "pricescale/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pricescale::dfa {

/// Cumulative sums y(k) of mean-subtracted samples.
struct Profile {
    std::vector<double> values;
    double source_mean = 0.0;
};

/// Root-mean-square detrended fluctuation F(n) on a strictly increasing scale grid.
struct FluctuationCurve {
    std::vector<std::size_t> scales;
    std::vector<double> F;
};

/// Local log-log slopes of F(n) over log-uniform scale bins.
/// bin_edges has one more entry than the other vectors; adjacent bins share an edge.
struct ScaleExponentCurve {
    std::vector<double> bin_edges;
    std::vector<double> bin_centers;
    std::vector<double> alpha_local;
    std::vector<double> alpha_err;
    std::vector<std::size_t> points;
};

struct DfaSummary {
    double alpha_mean = 0.0;
    double alpha_mean_err = 0.0;  // sample standard deviation across bins
    double alpha_max = 0.0;
    double alpha_max_err = 0.0;   // fit error of the bin holding the maximum
    std::size_t bins = 0;
};

struct Options {
    // Repeat the box partition from the series tail and average both passes.
    bool both_ends = false;
};

Profile integrate_profile(std::span<const double> values);
/// Requires a cleaned series of at least 8 samples.
Profile integrate_profile(const PriceSeries& series);

/// `count` logarithmically spaced integers in [lo, min(hi, N/4)], deduplicated.
std::vector<std::size_t> default_scales(std::size_t series_length, std::size_t lo = 4,
                                        std::size_t hi = 720, std::size_t count = 60);

FluctuationCurve fluctuation_function(const Profile& profile, std::span<const std::size_t> scales,
                                      const Options& options = {});

ScaleExponentCurve local_exponents(const FluctuationCurve& curve, std::size_t bins_per_decade = 8);

DfaSummary summary_exponents(const ScaleExponentCurve& curve);

}  // namespace pricescale::dfa
