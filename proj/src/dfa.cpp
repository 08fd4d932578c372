#include "pricescale/dfa.hpp"

#include "pricescale/error.hpp"
#include "pricescale/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pricescale::dfa {

namespace {

constexpr const char* kModule = "dfa";

// Mean-square residual of the least-squares line through y[0..n) against k = 0..n-1.
double box_mean_square(std::span<const double> y) {
    const std::size_t n = y.size();
    const double dn = static_cast<double>(n);
    const double kbar = (dn - 1.0) / 2.0;
    const double skk = dn * (dn * dn - 1.0) / 12.0;

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= dn;

    double sky = 0.0;
    for (std::size_t k = 0; k < n; ++k) sky += (static_cast<double>(k) - kbar) * (y[k] - ybar);
    const double slope = sky / skk;

    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (ybar + slope * (static_cast<double>(k) - kbar));
        ss += r * r;
    }
    return ss / dn;
}

}  // namespace

Profile integrate_profile(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(Errc::SeriesTooShort, kModule, "profile needs at least two samples");
    }
    Profile p;
    p.source_mean = stats::mean(values);
    p.values.resize(values.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        acc += values[k] - p.source_mean;
        p.values[k] = acc;
    }
    return p;
}

Profile integrate_profile(const PriceSeries& series) {
    require_clean(series, kModule);
    if (series.size() < 8) {
        throw Error(Errc::SeriesTooShort, kModule,
                    "DFA needs at least 8 samples, got " + std::to_string(series.size()));
    }
    return integrate_profile(series.values());
}

std::vector<std::size_t> default_scales(std::size_t series_length, std::size_t lo, std::size_t hi,
                                        std::size_t count) {
    const std::size_t top = std::min(hi, series_length / 4);
    if (lo < 4 || top < lo) {
        throw Error(Errc::InvalidScale, kModule,
                    "no admissible scales in [" + std::to_string(lo) + ", " + std::to_string(top) +
                        "] for length " + std::to_string(series_length));
    }
    std::vector<std::size_t> out;
    if (count <= 1 || top == lo) {
        out.push_back(lo);
        return out;
    }
    const double a = std::log(static_cast<double>(lo));
    const double b = std::log(static_cast<double>(top));
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        auto n = static_cast<std::size_t>(std::lround(std::exp(a + t * (b - a))));
        n = std::clamp(n, lo, top);
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

FluctuationCurve fluctuation_function(const Profile& profile, std::span<const std::size_t> scales,
                                      const Options& options) {
    const std::size_t N = profile.values.size();
    if (scales.empty()) {
        throw Error(Errc::InvalidScale, kModule, "empty scale grid");
    }
    FluctuationCurve curve;
    curve.scales.reserve(scales.size());
    curve.F.reserve(scales.size());

    const std::span<const double> y(profile.values);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const std::size_t n = scales[i];
        if (i > 0 && n <= scales[i - 1]) {
            throw Error(Errc::InvalidScale, kModule, "scales must be strictly increasing");
        }
        if (n < 4 || n > N / 4) {
            throw Error(Errc::InvalidScale, kModule,
                        "scale " + std::to_string(n) + " outside [4, " + std::to_string(N / 4) + "]");
        }
        const std::size_t M = N / n;
        if (M < 4) {
            throw Error(Errc::InsufficientBoxes, kModule,
                        "scale " + std::to_string(n) + " leaves only " + std::to_string(M) + " boxes");
        }

        double sum = 0.0;
        for (std::size_t m = 0; m < M; ++m) sum += box_mean_square(y.subspan(m * n, n));
        double boxes = static_cast<double>(M);
        if (options.both_ends) {
            const std::size_t offset = N - M * n;
            for (std::size_t m = 0; m < M; ++m) {
                sum += box_mean_square(y.subspan(offset + m * n, n));
            }
            boxes *= 2.0;
        }
        curve.scales.push_back(n);
        curve.F.push_back(std::sqrt(sum / boxes));
    }
    return curve;
}

ScaleExponentCurve local_exponents(const FluctuationCurve& curve, std::size_t bins_per_decade) {
    if (bins_per_decade < 2) {
        throw Error(Errc::InvalidArgument, kModule, "bins_per_decade must be at least 2");
    }
    const std::size_t P = curve.scales.size();
    if (P != curve.F.size()) {
        throw Error(Errc::InvalidArgument, kModule, "scales and F differ in length");
    }
    if (P < 3) {
        throw Error(Errc::DegenerateBin, kModule, "need at least 3 curve points for one bin");
    }

    std::vector<double> logn(P), logF(P);
    for (std::size_t i = 0; i < P; ++i) {
        if (i > 0 && curve.scales[i] <= curve.scales[i - 1]) {
            throw Error(Errc::InvalidScale, kModule, "scales must be strictly increasing");
        }
        if (!(curve.F[i] > 0.0) || !std::isfinite(curve.F[i])) {
            throw Error(Errc::NumericalFailure, kModule,
                        "F(" + std::to_string(curve.scales[i]) + ") is not positive; no log-log slope");
        }
        logn[i] = std::log10(static_cast<double>(curve.scales[i]));
        logF[i] = std::log10(curve.F[i]);
    }

    // Raw bin index of every point on a log grid anchored at the smallest scale.
    const double origin = logn.front();
    const double width = 1.0 / static_cast<double>(bins_per_decade);
    std::vector<long> raw(P);
    for (std::size_t i = 0; i < P; ++i) {
        raw[i] = static_cast<long>(std::floor((logn[i] - origin) / width + 1e-9));
    }

    // Groups of consecutive raw bins; under-filled groups merge rightward and a
    // short tail merges into the last complete group.
    struct Group {
        std::size_t first, last;  // point index range, inclusive
        long bin_lo, bin_hi;      // raw bin range, inclusive
    };
    std::vector<Group> groups;
    std::size_t start = 0;
    while (start < P) {
        std::size_t end = start;
        while (true) {
            while (end + 1 < P && raw[end + 1] == raw[end]) ++end;
            if (end - start + 1 >= 3 || end + 1 >= P) break;
            ++end;
        }
        if (end - start + 1 < 3 && !groups.empty()) {
            groups.back().last = end;
            groups.back().bin_hi = raw[end];
        } else {
            const long lo_bin = groups.empty() ? raw[start] : groups.back().bin_hi + 1;
            groups.push_back({start, end, lo_bin, raw[end]});
        }
        start = end + 1;
    }

    ScaleExponentCurve out;
    for (const auto& g : groups) {
        const std::size_t count = g.last - g.first + 1;
        const std::span<const double> xs(logn.data() + g.first, count);
        const std::span<const double> ys(logF.data() + g.first, count);
        const LinearFit fit = fit_line(xs, ys);

        const double lo = origin + static_cast<double>(g.bin_lo) * width;
        const double hi = origin + static_cast<double>(g.bin_hi + 1) * width;
        if (out.bin_edges.empty()) out.bin_edges.push_back(std::pow(10.0, lo));
        out.bin_edges.push_back(std::pow(10.0, hi));
        out.bin_centers.push_back(std::pow(10.0, 0.5 * (lo + hi)));
        out.alpha_local.push_back(fit.slope);
        out.alpha_err.push_back(fit.slope_err);
        out.points.push_back(count);
    }
    return out;
}

DfaSummary summary_exponents(const ScaleExponentCurve& curve) {
    const auto& a = curve.alpha_local;
    if (a.size() < 2) {
        throw Error(Errc::InsufficientBins, kModule,
                    "summary needs at least 2 exponent bins, got " + std::to_string(a.size()));
    }
    DfaSummary s;
    s.bins = a.size();
    s.alpha_mean = stats::mean(a);
    s.alpha_mean_err = stats::sample_stddev(a);
    const auto it = std::max_element(a.begin(), a.end());
    s.alpha_max = *it;
    s.alpha_max_err = curve.alpha_err[static_cast<std::size_t>(it - a.begin())];
    return s;
}

}  // namespace pricescale::dfa
