#include "pricescale/regression.hpp"

#include "pricescale/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pricescale {

namespace {

LinearFit fit_impl(std::span<const double> x, std::span<const double> y,
                   std::span<const double> w) {
    if (x.size() != y.size() || (!w.empty() && w.size() != x.size())) {
        throw Error(Errc::InvalidArgument, "regression", "x, y and weights must have equal length");
    }
    const auto weight = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };

    double sw = 0.0, sx = 0.0, sy = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wi = weight(i);
        if (wi < 0.0 || !std::isfinite(wi)) {
            throw Error(Errc::InvalidArgument, "regression", "weights must be finite and non-negative");
        }
        if (wi == 0.0) continue;
        sw += wi;
        sx += wi * x[i];
        sy += wi * y[i];
        ++used;
    }
    if (used < 2) {
        throw Error(Errc::NumericalFailure, "regression", "at least two weighted points are required");
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - xbar;
        sxx += weight(i) * dx * dx;
        sxy += weight(i) * dx * (y[i] - ybar);
    }
    if (!(sxx > 0.0)) {
        throw Error(Errc::DegenerateBin, "regression", "abscissae are identical");
    }

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.points = used;

    if (used > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            ssr += weight(i) * r * r;
        }
        const double sigma2 = ssr / static_cast<double>(used - 2);
        fit.slope_err = std::sqrt(sigma2 / sxx);
    }
    return fit;
}

}  // namespace

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    return fit_impl(x, y, {});
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights) {
    return fit_impl(x, y, weights);
}

namespace stats {

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile(std::vector<double> v, double p) {
    if (v.empty()) {
        throw Error(Errc::EmptySample, "stats", "quantile of an empty sample");
    }
    std::sort(v.begin(), v.end());
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double median_absolute_deviation(std::span<const double> v) {
    const double m = median({v.begin(), v.end()});
    std::vector<double> dev;
    dev.reserve(v.size());
    for (double x : v) dev.push_back(std::abs(x - m));
    return median(std::move(dev));
}

}  // namespace stats
}  // namespace pricescale
