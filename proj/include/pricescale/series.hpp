#pragma once

#include <bitset>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pricescale {

using Timestamp = std::chrono::sys_seconds;

/// A run of missing samples: `length` consecutive markers starting at `start`.
struct Gap {
    std::size_t start = 0;
    std::size_t length = 0;

    friend bool operator==(const Gap&, const Gap&) = default;
};

/// Uniformly sampled prices. Missing samples are stored as quiet NaN markers
/// until `clean` removes them; timestamps are start_time + i * cadence.
class PriceSeries {
public:
    PriceSeries(std::string market_id, Timestamp start_time, std::vector<double> values,
                int cadence_hours = 1);

    const std::string& market_id() const noexcept { return market_id_; }
    Timestamp start_time() const noexcept { return start_time_; }
    int cadence_hours() const noexcept { return cadence_hours_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    Timestamp time_at(std::size_t i) const;
    const std::vector<Gap>& gaps() const noexcept { return gaps_; }
    bool is_clean() const noexcept { return gaps_.empty(); }

    friend bool operator==(const PriceSeries& a, const PriceSeries& b);

private:
    std::string market_id_;
    Timestamp start_time_;
    std::vector<double> values_;
    int cadence_hours_;
    std::vector<Gap> gaps_;
};

/// Throws GapsPresent (tagged with `module`) unless the series is cleaned.
void require_clean(const PriceSeries& series, std::string_view module);

struct CsvSchema {
    std::string time_column = "timestamp";
    std::string price_column = "price";
    char delimiter = ',';
    std::string market_id = "market";
};

PriceSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
PriceSeries read_csv(std::istream& in, const CsvSchema& schema = {});

/// Writes `timestamp,price` rows that `load_csv` reads back exactly.
void write_csv(std::ostream& out, const PriceSeries& series, const CsvSchema& schema = {});

/// Parses ISO-8601 (`YYYY-MM-DD[T ]HH[:MM[:SS]]` with optional `Z` or `±HH:MM`)
/// or integer epoch seconds.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

enum class GapPolicy { LinearInterpolate, CarryForward, Fail };

std::string_view to_string(GapPolicy policy) noexcept;
GapPolicy parse_gap_policy(std::string_view text);

struct CleanOptions {
    GapPolicy policy = GapPolicy::LinearInterpolate;
    std::size_t max_gap_hours = 6;
};

PriceSeries clean(const PriceSeries& series, const CleanOptions& options = {});

/// On-peak hour/weekday sets. Weekdays are ISO-ordered: 0 = Monday ... 6 = Sunday.
/// Hours index the hour beginning in local time (UTC + timezone_offset).
class PeakCalendar {
public:
    PeakCalendar(std::bitset<24> on_peak_hours, std::bitset<7> on_peak_weekdays,
                 int timezone_offset_hours = 0);

    /// Hour-ending 8 through 23 (hour-beginning 07..22), Monday to Friday.
    static PeakCalendar standard();

    const std::bitset<24>& on_peak_hours() const noexcept { return hours_; }
    const std::bitset<7>& on_peak_weekdays() const noexcept { return weekdays_; }
    int timezone_offset_hours() const noexcept { return offset_; }

    bool is_on_peak(Timestamp utc) const;

private:
    std::bitset<24> hours_;
    std::bitset<7> weekdays_;
    int offset_;
};

struct PeakSplit {
    PriceSeries on;
    PriceSeries off;
};

/// Partitions a cleaned series; each subset is re-indexed as a contiguous series.
PeakSplit split_peak(const PriceSeries& series, const PeakCalendar& calendar);

struct AggregatedSeries {
    std::string market_id;
    std::size_t source_length = 0;
    std::size_t scale_n = 1;
    std::vector<double> bin_means;
};

/// Means over non-overlapping bins of width n; the trailing partial bin is dropped.
AggregatedSeries aggregate(const PriceSeries& series, std::size_t n);
std::vector<double> bin_means(std::span<const double> values, std::size_t n);

}  // namespace pricescale
