#pragma once

#include "pricescale/config.hpp"
#include "pricescale/dfa.hpp"
#include "pricescale/increments.hpp"
#include "pricescale/pareto.hpp"
#include "pricescale/series.hpp"
#include "pricescale/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pricescale {

inline constexpr int kReportSchemaVersion = 1;

/// An estimate that could not be formed for data-size reasons.
struct Skipped {
    std::string analysis;
    std::string reason;
};

struct IncrementResult {
    std::size_t scale_n = 1;
    increments::PairSet pairs;
    std::optional<increments::BinnedCurve> curve;  // absent below 100 pairs
    increments::ScenarioCounts scenarios;
};

struct SeriesResult {
    std::string label;  // all, on_peak, off_peak
    std::size_t samples = 0;

    std::vector<std::size_t> dfa_scales;
    dfa::FluctuationCurve fluctuation;
    dfa::ScaleExponentCurve local_exponents;
    dfa::DfaSummary dfa;

    spectral::Spectrum spectrum;
    std::optional<spectral::BetaEstimate> beta;
    spectral::CycleReport cycles;

    std::optional<pareto::Histogram> histogram;
    pareto::TwoRangeReport pareto;

    std::vector<IncrementResult> increments;
    std::vector<Skipped> skipped;
};

struct Report {
    int schema_version = kReportSchemaVersion;
    std::string tool_version;
    std::string generated_at;  // excluded from reproducibility comparisons
    std::string market_id;
    std::size_t input_samples = 0;
    std::size_t filled_samples = 0;
    std::string start_time;
    AnalysisConfig config;
    std::vector<SeriesResult> series;
};

/// Runs every analysis on one cleaned series. Module errors carry `label`.
SeriesResult analyze_series(const PriceSeries& series, const std::string& label,
                            const AnalysisConfig& config);

/// Cleans `raw`, splits it by the peak calendar when enabled and analyzes the
/// resulting series concurrently. Nothing is written.
Report run_analysis(const PriceSeries& raw, const AnalysisConfig& config);

/// Loads config.input.path and runs the analysis.
Report run_analysis(const AnalysisConfig& config);

nlohmann::json to_json(const Report& report);

/// Structural check of a report document; throws SchemaMismatch.
void validate_report(const nlohmann::json& doc);

/// Writes report.json and, when enabled, <series>_<analysis>.csv files into
/// config.output.dir.
void write_outputs(const Report& report);

/// run_analysis + write_outputs.
Report cmd_analyze(const AnalysisConfig& config);

}  // namespace pricescale
