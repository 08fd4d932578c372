#include "pricescale/spectral.hpp"

#include "fft.hpp"
#include "pricescale/error.hpp"
#include "pricescale/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pricescale::spectral {

namespace {

constexpr const char* kModule = "spectral";

std::size_t largest_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p * 2 <= n) p *= 2;
    return p;
}

}  // namespace

std::string_view to_string(Window w) noexcept {
    return w == Window::Hann ? "hann" : "rectangular";
}

Window parse_window(std::string_view text) {
    if (text == "rectangular" || text == "none") return Window::Rectangular;
    if (text == "hann") return Window::Hann;
    throw Error(Errc::InvalidArgument, kModule, "unknown window '" + std::string(text) + "'");
}

Spectrum periodogram(std::span<const double> values, double cadence_hours, Window window) {
    if (values.size() < 64) {
        throw Error(Errc::SeriesTooShort, kModule,
                    "periodogram needs at least 64 samples, got " + std::to_string(values.size()));
    }
    if (!(cadence_hours > 0.0)) {
        throw Error(Errc::InvalidArgument, kModule, "cadence must be positive");
    }
    const std::size_t N = largest_power_of_two(values.size());
    const double dN = static_cast<double>(N);

    std::vector<double> x(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(N));
    const double mean = stats::mean(x);
    for (double& v : x) v -= mean;

    double window_power = 1.0;
    if (window == Window::Hann) {
        double sw2 = 0.0;
        for (std::size_t t = 0; t < N; ++t) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / dN);
            x[t] *= w;
            sw2 += w * w;
        }
        window_power = sw2 / dN;
    }

    const auto X = detail::real_dft(x);

    Spectrum spec;
    spec.record_length = dN * cadence_hours;
    spec.samples_used = N;
    spec.samples_dropped = values.size() - N;
    spec.window = window;
    spec.frequencies.resize(N / 2);
    spec.power.resize(N / 2);
    const double scale = cadence_hours / (dN * window_power);
    for (std::size_t k = 1; k <= N / 2; ++k) {
        const double one_sided = (k == N / 2) ? 1.0 : 2.0;
        spec.frequencies[k - 1] = static_cast<double>(k) / spec.record_length;
        spec.power[k - 1] = one_sided * scale * std::norm(X[k]);
    }
    return spec;
}

Spectrum periodogram(const PriceSeries& series, Window window) {
    require_clean(series, kModule);
    return periodogram(series.values(), static_cast<double>(series.cadence_hours()), window);
}

FrequencyRange full_range(const Spectrum& spec) {
    if (spec.frequencies.empty()) return {};
    return {spec.frequencies.front(), spec.frequencies.back()};
}

BetaEstimate spectral_exponent(const Spectrum& spec, FrequencyRange fit_range,
                               std::span<const double> excluded_periods,
                               const FitOptions& options) {
    if (spec.frequencies.empty()) {
        throw Error(Errc::EmptyFitRange, kModule, "empty spectrum");
    }
    const auto support = full_range(spec);
    constexpr double tol = 1e-9;
    if (!(fit_range.lo > 0.0) || fit_range.lo < support.lo * (1.0 - tol) ||
        fit_range.hi > support.hi * (1.0 + tol) || !(fit_range.lo < fit_range.hi)) {
        throw Error(Errc::InvalidArgument, kModule,
                    "fit range [" + std::to_string(fit_range.lo) + ", " + std::to_string(fit_range.hi) +
                        "] is not inside the spectrum support [" + std::to_string(support.lo) + ", " +
                        std::to_string(support.hi) + "]");
    }
    if (options.bins_per_decade < 1) {
        throw Error(Errc::InvalidArgument, kModule, "bins_per_decade must be positive");
    }

    std::vector<double> excluded;
    for (double period : excluded_periods) {
        if (!(period > 0.0)) {
            throw Error(Errc::InvalidArgument, kModule, "excluded periods must be positive");
        }
        for (std::size_t h = 1; h <= options.harmonics + 1; ++h) {
            excluded.push_back(static_cast<double>(h) / period);
        }
    }
    const auto is_excluded = [&](double f) {
        return std::any_of(excluded.begin(), excluded.end(), [&](double f0) {
            return std::abs(f - f0) <= options.exclusion_halfwidth * f0;
        });
    };

    const double origin = std::log10(fit_range.lo);
    const double bpd = static_cast<double>(options.bins_per_decade);
    struct Bin {
        long index = 0;
        double sum_logf = 0.0;
        double sum_power = 0.0;
        std::size_t count = 0;
    };
    std::vector<Bin> bins;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
        const double f = spec.frequencies[i];
        if (f < fit_range.lo * (1.0 - tol) || f > fit_range.hi * (1.0 + tol) || is_excluded(f)) {
            continue;
        }
        ++kept;
        const double lf = std::log10(f);
        const long idx = static_cast<long>(std::floor((lf - origin) * bpd + tol));
        if (bins.empty() || bins.back().index != idx) bins.push_back({idx, 0.0, 0.0, 0});
        bins.back().sum_logf += lf;
        bins.back().sum_power += spec.power[i];
        bins.back().count += 1;
    }
    if (kept == 0) {
        throw Error(Errc::EmptyFitRange, kModule, "no frequencies left in the fit range after exclusions");
    }

    std::vector<double> xs, ys;
    for (const auto& b : bins) {
        const double mean_power = b.sum_power / static_cast<double>(b.count);
        if (!(mean_power > 0.0)) continue;
        xs.push_back(b.sum_logf / static_cast<double>(b.count));
        ys.push_back(std::log10(mean_power));
    }
    if (xs.size() < 10) {
        throw Error(Errc::InsufficientBins, kModule,
                    "only " + std::to_string(xs.size()) +
                        " populated log bins in the fit range; at least 10 are required");
    }

    const LinearFit fit = fit_line(xs, ys);
    BetaEstimate est;
    est.beta = -fit.slope;
    est.beta_err = fit.slope_err;
    est.fit_range = fit_range;
    est.alpha_theor = (est.beta + 1.0) / 2.0;
    est.alpha_theor_err = est.beta_err / 2.0;
    est.bins_used = xs.size();

    std::vector<double> local;
    local.reserve(xs.size() - 1);
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        local.push_back(-(ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]));
    }
    est.alpha_theor_spread = stats::sample_stddev(local) / 2.0;
    return est;
}

CycleReport detect_cycles(const Spectrum& spec, std::span<const double> candidate_periods) {
    const auto& f = spec.frequencies;
    const auto& S = spec.power;
    CycleReport report;
    for (double period : candidate_periods) {
        if (!(period > 2.0) || !(period < spec.record_length / 2.0)) {
            throw Error(Errc::CandidateOutOfRange, kModule,
                        "candidate period " + std::to_string(period) + " h outside (2, " +
                            std::to_string(spec.record_length / 2.0) + ")");
        }
        const double f0 = 1.0 / period;

        std::vector<std::size_t> peak;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (std::abs(f[i] - f0) <= 0.02 * f0) peak.push_back(i);
        }
        if (peak.empty()) {
            const auto it = std::lower_bound(f.begin(), f.end(), f0);
            std::size_t i = static_cast<std::size_t>(it - f.begin());
            if (i == f.size() || (i > 0 && f0 - f[i - 1] < f[i] - f0)) --i;
            peak.push_back(i);
        }
        const std::size_t peak_lo = peak.front();
        const std::size_t peak_hi = peak.back();

        std::vector<double> background;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i >= peak_lo && i <= peak_hi) continue;
            if (std::abs(f[i] - f0) <= 0.20 * f0) background.push_back(S[i]);
        }
        // Coarse spectra (long periods) may hold no bins in the band; fall back
        // to the two nearest bins on each side of the peak window.
        if (background.size() < 2) {
            background.clear();
            for (std::size_t d = 1; d <= 2; ++d) {
                if (peak_lo >= d) background.push_back(S[peak_lo - d]);
                if (peak_hi + d < f.size()) background.push_back(S[peak_hi + d]);
            }
        }

        CycleEntry e;
        e.period_hours = period;
        e.peak_power = 0.0;
        for (std::size_t i : peak) e.peak_power = std::max(e.peak_power, S[i]);
        e.background_power = stats::median(background);
        if (e.background_power > 0.0) {
            e.significance = e.peak_power / e.background_power;
        } else {
            e.significance = e.peak_power > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace pricescale::spectral
