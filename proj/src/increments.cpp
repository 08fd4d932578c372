#include "pricescale/increments.hpp"

#include "pricescale/error.hpp"
#include "pricescale/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pricescale::increments {

namespace {

constexpr const char* kModule = "increments";

std::optional<SlopeFit> quadrant_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 3) return std::nullopt;
    const LinearFit fit = fit_line(x, y);
    return SlopeFit{fit.slope, fit.slope_err, x.size()};
}

}  // namespace

IncrementSeries multiscale_increments(const PriceSeries& series, std::size_t n) {
    require_clean(series, kModule);
    const std::size_t N = series.size();
    if (n < 1 || n > N / 4) {
        throw Error(Errc::InvalidScale, kModule,
                    "scale " + std::to_string(n) + " outside [1, " + std::to_string(N / 4) + "]");
    }
    const auto means = bin_means(series.values(), n);
    if (means.size() < 3) {
        throw Error(Errc::SeriesTooShort, kModule, "fewer than three complete bins");
    }
    IncrementSeries out;
    out.scale_n = n;
    out.deltas.resize(means.size() - 1);
    for (std::size_t i = 0; i + 1 < means.size(); ++i) out.deltas[i] = means[i + 1] - means[i];
    return out;
}

PairSet lag_pairs(const IncrementSeries& incs) {
    if (incs.deltas.size() < 2) {
        throw Error(Errc::SeriesTooShort, kModule, "lag pairs need at least two increments");
    }
    PairSet out;
    out.pairs.reserve(incs.deltas.size() - 1);
    for (std::size_t i = 1; i < incs.deltas.size(); ++i) {
        out.pairs.push_back({incs.deltas[i - 1], incs.deltas[i]});
    }
    return out;
}

BinnedCurve binned_regression(const PairSet& pairs, const BinningOptions& options) {
    const auto& p = pairs.pairs;
    if (p.size() < 100) {
        throw Error(Errc::SeriesTooShort, kModule,
                    "binned regression needs at least 100 pairs, got " + std::to_string(p.size()));
    }
    if (options.bin_count < 10) {
        throw Error(Errc::InvalidArgument, kModule, "bin_count must be at least 10");
    }

    std::vector<double> magnitudes;
    magnitudes.reserve(p.size());
    for (const auto& pr : p) magnitudes.push_back(std::abs(pr.prev));
    const double clip = stats::quantile(std::move(magnitudes), options.clip_quantile);

    BinnedCurve curve;
    curve.clip = clip;
    if (!(clip > 0.0)) return curve;  // nearly all preceding increments vanish

    const std::size_t B = options.bin_count;
    const double width = 2.0 * clip / static_cast<double>(B);
    std::vector<double> sums(B, 0.0), prev_sums(B, 0.0);
    std::vector<std::size_t> counts(B, 0);
    for (const auto& pr : p) {
        if (std::abs(pr.prev) > clip) continue;
        auto b = static_cast<std::size_t>(std::floor((pr.prev + clip) / width));
        if (b >= B) b = B - 1;
        sums[b] += pr.curr;
        prev_sums[b] += pr.prev;
        ++counts[b];
    }

    std::vector<double> q4x, q4y, q1x, q1y;
    for (std::size_t b = 0; b < B; ++b) {
        if (counts[b] == 0) continue;
        const double center = -clip + (static_cast<double>(b) + 0.5) * width;
        const double mean = sums[b] / static_cast<double>(counts[b]);
        const double mean_prev = prev_sums[b] / static_cast<double>(counts[b]);
        curve.prev_bin_centers.push_back(center);
        curve.mean_prev.push_back(mean_prev);
        curve.mean_curr.push_back(mean);
        curve.counts.push_back(counts[b]);
        if (counts[b] < options.min_occupancy || center <= 0.0) continue;
        if (mean < 0.0) {
            q4x.push_back(mean_prev);
            q4y.push_back(mean);
        } else if (mean > 0.0) {
            q1x.push_back(mean_prev);
            q1y.push_back(mean);
        }
    }
    curve.q4_slope = quadrant_fit(q4x, q4y);
    curve.q1_slope = quadrant_fit(q1x, q1y);
    return curve;
}

ScenarioCounts classify_scenarios(const PairSet& pairs, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(Errc::InvalidArgument, kModule, "stability threshold must be positive");
    }
    ScenarioCounts c;
    c.epsilon = epsilon;
    for (const auto& [prev, curr] : pairs.pairs) {
        if (prev > epsilon && curr < -epsilon) {
            ++c.rise_then_fall;
        } else if (std::abs(prev) <= epsilon && curr > epsilon) {
            ++c.stable_then_rise;
        } else if (prev < -epsilon && std::abs(curr) <= epsilon) {
            ++c.fall_then_stable;
        } else if (prev > epsilon && curr > epsilon) {
            ++c.rise_then_rise;
        } else {
            ++c.unclassified;
        }
    }
    return c;
}

double default_epsilon(const IncrementSeries& incs) {
    const auto& d = incs.deltas;
    if (d.empty()) {
        throw Error(Errc::SeriesTooShort, kModule, "no increments");
    }
    const double mad = stats::median_absolute_deviation(d);
    if (mad > 0.0) return 0.5 * mad;

    const double med = stats::median(d);
    double mean_abs = 0.0;
    for (double x : d) mean_abs += std::abs(x - med);
    mean_abs /= static_cast<double>(d.size());
    if (mean_abs > 0.0) return 0.5 * mean_abs;
    return std::numeric_limits<double>::min();
}

}  // namespace pricescale::increments
