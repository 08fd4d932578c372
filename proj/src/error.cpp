#include "pricescale/error.hpp"

namespace pricescale {

ErrorKind kind_of(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument:
        case Errc::InvalidScale:
        case Errc::CandidateOutOfRange:
        case Errc::InvalidSpec:
            return ErrorKind::Usage;
        case Errc::UnreadableFile:
        case Errc::ParseError:
        case Errc::NonHourlyCadence:
        case Errc::DuplicateTimestamp:
        case Errc::BoundaryGap:
        case Errc::GapTooLong:
        case Errc::GapsPresent:
        case Errc::SeriesTooShort:
        case Errc::EmptySample:
        case Errc::SchemaMismatch:
            return ErrorKind::Data;
        case Errc::InsufficientBoxes:
        case Errc::DegenerateBin:
        case Errc::EmptyFitRange:
        case Errc::InsufficientBins:
        case Errc::NumericalFailure:
            return ErrorKind::Numerical;
    }
    return ErrorKind::Data;
}

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::UnreadableFile: return "UnreadableFile";
        case Errc::ParseError: return "ParseError";
        case Errc::NonHourlyCadence: return "NonHourlyCadence";
        case Errc::DuplicateTimestamp: return "DuplicateTimestamp";
        case Errc::BoundaryGap: return "BoundaryGap";
        case Errc::GapTooLong: return "GapTooLong";
        case Errc::GapsPresent: return "GapsPresent";
        case Errc::SeriesTooShort: return "SeriesTooShort";
        case Errc::InvalidScale: return "InvalidScale";
        case Errc::InsufficientBoxes: return "InsufficientBoxes";
        case Errc::DegenerateBin: return "DegenerateBin";
        case Errc::EmptyFitRange: return "EmptyFitRange";
        case Errc::InsufficientBins: return "InsufficientBins";
        case Errc::EmptySample: return "EmptySample";
        case Errc::CandidateOutOfRange: return "CandidateOutOfRange";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

std::string_view remediation_hint(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "check the option value against its documented range";
        case Errc::UnreadableFile: return "check the path and file permissions";
        case Errc::ParseError: return "fix the offending row or the column mapping";
        case Errc::NonHourlyCadence: return "resample the input to whole hours";
        case Errc::DuplicateTimestamp: return "remove or merge the duplicated hour";
        case Errc::BoundaryGap: return "trim the series so it starts and ends with observed prices";
        case Errc::GapTooLong: return "split the series at the outage or supply the missing hours";
        case Errc::GapsPresent: return "use the linear-interpolate or carry-forward gap policy";
        case Errc::SeriesTooShort: return "supply a longer series";
        case Errc::InvalidScale: return "choose scales inside the admissible range for this length";
        case Errc::InsufficientBoxes: return "reduce the largest scale or supply a longer series";
        case Errc::DegenerateBin: return "use a scale grid with more distinct scales";
        case Errc::EmptyFitRange: return "widen the fit range or reduce the excluded periods";
        case Errc::InsufficientBins: return "widen the range, reduce the bin width or supply more data";
        case Errc::EmptySample: return "adjust the price range to cover the observed prices";
        case Errc::CandidateOutOfRange: return "choose candidate periods between 2 hours and half the record";
        case Errc::InvalidSpec: return "fix the generator parameters";
        case Errc::SchemaMismatch: return "regenerate the report with the current tool version";
        case Errc::NumericalFailure: return "inspect the input for constant or degenerate segments";
    }
    return "";
}

Error::Error(Errc code, std::string module, const std::string& message,
             std::optional<std::size_t> row)
    : std::runtime_error(message), code_(code), module_(std::move(module)), row_(row) {}

Error& Error::with_series(std::string label) {
    series_label_ = std::move(label);
    return *this;
}

std::string Error::describe() const {
    std::string out = module_;
    out += ": ";
    out += to_string(code_);
    if (!series_label_.empty()) {
        out += " [series ";
        out += series_label_;
        out += "]";
    }
    out += ": ";
    out += what();
    if (row_) {
        out += " (row ";
        out += std::to_string(*row_);
        out += ")";
    }
    const auto hint = remediation_hint(code_);
    if (!hint.empty()) {
        out += "; hint: ";
        out += hint;
    }
    return out;
}

}  // namespace pricescale
