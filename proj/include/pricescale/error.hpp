#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pricescale {

/// Specific failure conditions raised by the analysis modules.
enum class Errc {
    InvalidArgument,
    UnreadableFile,
    ParseError,
    NonHourlyCadence,
    DuplicateTimestamp,
    BoundaryGap,
    GapTooLong,
    GapsPresent,
    SeriesTooShort,
    InvalidScale,
    InsufficientBoxes,
    DegenerateBin,
    EmptyFitRange,
    InsufficientBins,
    EmptySample,
    CandidateOutOfRange,
    InvalidSpec,
    SchemaMismatch,
    NumericalFailure,
};

/// Coarse classification that maps onto CLI exit codes (1, 2, 3).
enum class ErrorKind { Usage = 1, Data = 2, Numerical = 3 };

ErrorKind kind_of(Errc code) noexcept;
std::string_view to_string(Errc code) noexcept;
std::string_view remediation_hint(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string module, const std::string& message,
          std::optional<std::size_t> row = std::nullopt);

    Errc code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_of(code_); }
    const std::string& module() const noexcept { return module_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    const std::string& series_label() const noexcept { return series_label_; }

    /// Attach the label of the series being analyzed (all, on_peak, off_peak).
    Error& with_series(std::string label);

    /// One-line description including module, series and hint.
    std::string describe() const;

private:
    Errc code_;
    std::string module_;
    std::optional<std::size_t> row_;
    std::string series_label_;
};

}  // namespace pricescale
