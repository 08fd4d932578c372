#pragma once

#include "pricescale/pareto.hpp"
#include "pricescale/series.hpp"
#include "pricescale/spectral.hpp"

#include <array>
#include <bitset>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pricescale {

// Analysis configuration. The file format is line based:
//
//   # comment
//   [section]
//   key = value
//
// Lists are comma separated. Hour and weekday sets accept ranges such as
// `7-22` or `0-4,6`. format_config() writes every field with its default
// documented in a comment, and parse_config(format_config(c)) == c.

struct InputConfig {
    std::filesystem::path path;
    std::string market_id = "market";
    std::string time_column = "timestamp";
    std::string price_column = "price";
    char delimiter = ',';
    GapPolicy gap_policy = GapPolicy::LinearInterpolate;
    std::size_t max_gap_hours = 6;

    CsvSchema schema() const { return {time_column, price_column, delimiter, market_id}; }
    friend bool operator==(const InputConfig&, const InputConfig&) = default;
};

struct PeakConfig {
    bool enabled = true;
    std::bitset<24> hours = PeakCalendar::standard().on_peak_hours();
    std::bitset<7> weekdays = PeakCalendar::standard().on_peak_weekdays();
    int timezone_offset_hours = 0;

    PeakCalendar calendar() const { return PeakCalendar(hours, weekdays, timezone_offset_hours); }
    friend bool operator==(const PeakConfig&, const PeakConfig&) = default;
};

struct DfaConfig {
    std::size_t scale_min = 4;
    std::size_t scale_max = 720;
    std::size_t scale_count = 60;
    std::size_t bins_per_decade = 8;
    bool both_ends = false;
    friend bool operator==(const DfaConfig&, const DfaConfig&) = default;
};

struct SpectralConfig {
    double fit_fmin = 0.0;  // 0 selects 1/T
    double fit_fmax = 0.0;  // 0 selects the Nyquist frequency
    std::vector<double> exclude_periods{24.0, 168.0};
    std::vector<double> cycle_periods{24.0, 168.0};
    spectral::Window window = spectral::Window::Rectangular;
    std::size_t bins_per_decade = 8;
    friend bool operator==(const SpectralConfig&, const SpectralConfig&) = default;
};

struct ParetoConfig {
    double bin_width = 5.0;
    std::array<double, 3> range_edges{1.0, 200.0, 1000.0};  // lower range, upper range
    pareto::Weighting weighting = pareto::Weighting::Unweighted;

    std::array<pareto::PriceRange, 2> ranges() const {
        return {pareto::PriceRange{range_edges[0], range_edges[1]},
                pareto::PriceRange{range_edges[1], range_edges[2]}};
    }
    friend bool operator==(const ParetoConfig&, const ParetoConfig&) = default;
};

struct IncrementsConfig {
    std::vector<std::size_t> scales{1, 12, 24, 168, 720};
    std::size_t bin_count = 40;
    std::size_t min_occupancy = 10;
    double clip_quantile = 0.995;
    double epsilon = 0.0;  // 0 selects half the median absolute deviation
    friend bool operator==(const IncrementsConfig&, const IncrementsConfig&) = default;
};

struct OutputConfig {
    std::filesystem::path dir = "pricescale-out";
    bool csv = true;
    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct AnalysisConfig {
    InputConfig input;
    PeakConfig peak;
    DfaConfig dfa;
    SpectralConfig spectral;
    ParetoConfig pareto;
    IncrementsConfig increments;
    OutputConfig output;
    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Throws InvalidArgument naming the line on malformed input or unknown keys.
AnalysisConfig parse_config(std::istream& in);
AnalysisConfig load_config(const std::filesystem::path& path);

/// Full config text, every key present, defaults documented in comments.
std::string format_config(const AnalysisConfig& config);

/// Apply one `section.key = value` assignment.
void set_config_value(AnalysisConfig& config, std::string_view section, std::string_view key,
                      std::string_view value);

/// Split `section.key=value` and apply it.
void apply_override(AnalysisConfig& config, std::string_view assignment);

/// Cross-field checks (scale bounds, ascending ranges, positive widths).
void validate_config(const AnalysisConfig& config);

/// Section -> key -> value text, in file order. Used for the report echo.
std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
config_entries(const AnalysisConfig& config);

}  // namespace pricescale
