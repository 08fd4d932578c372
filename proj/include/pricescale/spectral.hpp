#pragma once

#include "pricescale/series.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pricescale::spectral {

enum class Window { Rectangular, Hann };

std::string_view to_string(Window w) noexcept;
Window parse_window(std::string_view text);

/// One-sided power spectrum over positive frequencies (cycles per hour).
/// The series is truncated to the largest power of two before transforming.
struct Spectrum {
    std::vector<double> frequencies;
    std::vector<double> power;
    double record_length = 0.0;     // T in hours
    std::size_t samples_used = 0;
    std::size_t samples_dropped = 0;
    Window window = Window::Rectangular;
};

struct FrequencyRange {
    double lo = 0.0;
    double hi = 0.0;
};

struct BetaEstimate {
    double beta = 0.0;
    double beta_err = 0.0;
    FrequencyRange fit_range;
    double alpha_theor = 0.0;
    double alpha_theor_err = 0.0;
    // Half the sample standard deviation of slopes between adjacent log bins:
    // the scale-to-scale scatter of the exponent, on the same footing as the
    // DFA spread across bins.
    double alpha_theor_spread = 0.0;
    std::size_t bins_used = 0;
};

struct CycleEntry {
    double period_hours = 0.0;
    double peak_power = 0.0;
    double background_power = 0.0;
    double significance = 0.0;
};

struct CycleReport {
    std::vector<CycleEntry> entries;
};

struct FitOptions {
    std::size_t bins_per_decade = 8;
    double exclusion_halfwidth = 0.05;  // relative, around each excluded frequency
    std::size_t harmonics = 3;          // harmonics excluded beyond the fundamental
};

/// Requires a cleaned series of at least 64 samples.
Spectrum periodogram(const PriceSeries& series, Window window = Window::Rectangular);
Spectrum periodogram(std::span<const double> values, double cadence_hours = 1.0,
                     Window window = Window::Rectangular);

/// Full support of a spectrum: [1/T, Nyquist].
FrequencyRange full_range(const Spectrum& spec);

BetaEstimate spectral_exponent(const Spectrum& spec, FrequencyRange fit_range,
                               std::span<const double> excluded_periods,
                               const FitOptions& options = {});

CycleReport detect_cycles(const Spectrum& spec, std::span<const double> candidate_periods);

}  // namespace pricescale::spectral
