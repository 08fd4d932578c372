#include "pricescale/pareto.hpp"

#include "pricescale/error.hpp"
#include "pricescale/regression.hpp"

#include <cmath>
#include <string>

namespace pricescale::pareto {

namespace {

constexpr const char* kModule = "pareto";
constexpr std::size_t kMinBins = 5;

}  // namespace

Histogram::Histogram(std::vector<double> bin_edges, std::vector<double> density,
                     std::size_t total_count)
    : edges_(std::move(bin_edges)), density_(std::move(density)), total_count_(total_count) {
    if (edges_.size() < 2 || edges_.size() != density_.size() + 1) {
        throw Error(Errc::InvalidArgument, kModule, "histogram needs bins+1 edges");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < density_.size(); ++i) {
        if (!(edges_[i + 1] > edges_[i])) {
            throw Error(Errc::InvalidArgument, kModule, "histogram edges must ascend");
        }
        if (!(density_[i] >= 0.0) || !std::isfinite(density_[i])) {
            throw Error(Errc::InvalidArgument, kModule, "histogram density must be non-negative");
        }
        mass += density_[i] * (edges_[i + 1] - edges_[i]);
    }
    if (std::abs(mass - 1.0) > 1e-9) {
        throw Error(Errc::InvalidArgument, kModule,
                    "histogram mass is " + std::to_string(mass) + ", expected 1");
    }
}

double Histogram::count(std::size_t i) const {
    return density_[i] * bin_width(i) * static_cast<double>(total_count_);
}

std::string_view to_string(MomentClass c) noexcept {
    switch (c) {
        case MomentClass::NoMean: return "no-mean";
        case MomentClass::MeanOnly: return "mean-only";
        case MomentClass::MeanAndVariance: return "mean-and-variance";
    }
    return "";
}

Histogram histogram(std::span<const double> samples, double bin_width, PriceRange range) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw Error(Errc::InvalidArgument, kModule, "bin width must be positive");
    }
    if (range.lo < 0.0 || !(range.hi > range.lo)) {
        throw Error(Errc::InvalidArgument, kModule, "price range must satisfy 0 <= lo < hi");
    }
    const auto bins = static_cast<std::size_t>(std::floor((range.hi - range.lo) / bin_width + 1e-9));
    if (bins == 0) {
        throw Error(Errc::InvalidArgument, kModule, "bin width exceeds the price range");
    }
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = range.lo + static_cast<double>(i) * bin_width;
    }
    const double top = edges.back();

    std::vector<std::size_t> counts(bins, 0);
    std::size_t total = 0;
    for (double x : samples) {
        if (!(x >= range.lo) || x > top) continue;
        auto i = static_cast<std::size_t>((x - range.lo) / bin_width);
        if (i >= bins) i = bins - 1;  // x == top
        ++counts[i];
        ++total;
    }
    if (total == 0) {
        throw Error(Errc::EmptySample, kModule,
                    "no samples inside [" + std::to_string(range.lo) + ", " +
                        std::to_string(range.hi) + "]");
    }
    std::vector<double> density(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        density[i] = static_cast<double>(counts[i]) / (static_cast<double>(total) * bin_width);
    }
    return Histogram(std::move(edges), std::move(density), total);
}

Histogram histogram(const PriceSeries& series, double bin_width, PriceRange range) {
    require_clean(series, kModule);
    return histogram(series.values(), bin_width, range);
}

ParetoEstimate pareto_fit(const Histogram& hist, PriceRange range, Weighting weighting) {
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        const double c = hist.bin_center(i);
        const double d = hist.density()[i];
        if (c < range.lo || c > range.hi || !(d > 0.0) || !(c > 0.0)) continue;
        xs.push_back(std::log(c));
        ys.push_back(std::log(d));
        ws.push_back(hist.count(i));
    }
    if (xs.size() < kMinBins) {
        throw Error(Errc::InsufficientBins, kModule,
                    std::to_string(xs.size()) + " nonzero bins in [" + std::to_string(range.lo) +
                        ", " + std::to_string(range.hi) + "]; at least 5 are required");
    }
    const LinearFit fit =
        weighting == Weighting::CountWeighted ? fit_line(xs, ys, ws) : fit_line(xs, ys);
    ParetoEstimate est;
    est.gamma = -fit.slope - 1.0;
    est.gamma_err = fit.slope_err;
    est.price_range = range;
    est.bins_used = xs.size();
    return est;
}

MomentClass classify_moments(double gamma) noexcept {
    if (gamma <= 1.0) return MomentClass::NoMean;
    if (gamma <= 2.0) return MomentClass::MeanOnly;
    return MomentClass::MeanAndVariance;
}

MomentClass classify_moments(const ParetoEstimate& est) noexcept {
    return classify_moments(est.gamma);
}

TwoRangeReport two_range_report(std::span<const double> samples, std::array<PriceRange, 2> ranges,
                                double bin_width, Weighting weighting) {
    for (const auto& r : ranges) {
        if (!(r.hi > r.lo)) {
            throw Error(Errc::InvalidArgument, kModule, "each price range needs lo < hi");
        }
    }
    if (ranges[1].lo < ranges[0].hi) {
        throw Error(Errc::InvalidArgument, kModule,
                    "price ranges must be ascending and disjoint or adjacent");
    }
    TwoRangeReport report;
    report.ranges = ranges;

    std::optional<Histogram> hist;
    try {
        hist.emplace(histogram(samples, bin_width, {ranges[0].lo, ranges[1].hi}));
    } catch (const Error& e) {
        if (e.code() != Errc::EmptySample) throw;
        return report;
    }
    for (std::size_t k = 0; k < 2; ++k) {
        try {
            report.estimates[k] = pareto_fit(*hist, ranges[k], weighting);
        } catch (const Error& e) {
            if (e.code() != Errc::InsufficientBins) throw;
        }
    }
    return report;
}

TwoRangeReport two_range_report(const PriceSeries& series, std::array<PriceRange, 2> ranges,
                                double bin_width, Weighting weighting) {
    require_clean(series, kModule);
    return two_range_report(series.values(), ranges, bin_width, weighting);
}

double hill_estimate(std::span<const double> samples, double x_min) {
    if (!(x_min > 0.0)) {
        throw Error(Errc::InvalidArgument, kModule, "Hill threshold must be positive");
    }
    double sum = 0.0;
    std::size_t k = 0;
    for (double x : samples) {
        if (x >= x_min) {
            sum += std::log(x / x_min);
            ++k;
        }
    }
    if (k < 2 || !(sum > 0.0)) {
        throw Error(Errc::InsufficientBins, kModule, "too few samples above the Hill threshold");
    }
    return static_cast<double>(k) / sum;
}

}  // namespace pricescale::pareto
