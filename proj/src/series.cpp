#include "pricescale/series.hpp"

#include "pricescale/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace pricescale {

namespace {

constexpr std::string_view kModule = "timeseries-core";
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

Error core_error(Errc code, const std::string& msg,
                 std::optional<std::size_t> row = std::nullopt) {
    return Error(code, std::string(kModule), msg, row);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(delim, pos);
        if (next == std::string_view::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    const auto* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" || s == "-";
}

void compute_gaps(std::span<const double> values, std::vector<Gap>& gaps) {
    gaps.clear();
    for (std::size_t i = 0; i < values.size();) {
        if (std::isnan(values[i])) {
            std::size_t j = i;
            while (j < values.size() && std::isnan(values[j])) ++j;
            gaps.push_back({i, j - i});
            i = j;
        } else {
            ++i;
        }
    }
}

}  // namespace

PriceSeries::PriceSeries(std::string market_id, Timestamp start_time, std::vector<double> values,
                         int cadence_hours)
    : market_id_(std::move(market_id)),
      start_time_(start_time),
      values_(std::move(values)),
      cadence_hours_(cadence_hours) {
    if (values_.size() < 2) {
        throw core_error(Errc::SeriesTooShort, "a price series needs at least two samples");
    }
    if (cadence_hours_ <= 0) {
        throw core_error(Errc::InvalidArgument, "cadence must be positive");
    }
    for (double v : values_) {
        if (std::isinf(v)) {
            throw core_error(Errc::ParseError, "infinite price value");
        }
    }
    compute_gaps(values_, gaps_);
    if (gaps_.size() == 1 && gaps_.front().length == values_.size()) {
        throw core_error(Errc::EmptySample, "series contains no observed prices");
    }
}

Timestamp PriceSeries::time_at(std::size_t i) const {
    return start_time_ + std::chrono::hours(static_cast<long long>(i) * cadence_hours_);
}

bool operator==(const PriceSeries& a, const PriceSeries& b) {
    if (a.market_id_ != b.market_id_ || a.start_time_ != b.start_time_ ||
        a.cadence_hours_ != b.cadence_hours_ || a.values_.size() != b.values_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        const double x = a.values_[i], y = b.values_[i];
        if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
    return true;
}

void require_clean(const PriceSeries& series, std::string_view module) {
    if (!series.is_clean()) {
        throw Error(Errc::GapsPresent, std::string(module),
                    "series contains " + std::to_string(series.gaps().size()) +
                        " unfilled gap(s); run clean first");
    }
}

// ---------------------------------------------------------------------------
// Timestamps

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    const auto s = trim(text);
    const auto bad = [&] {
        return core_error(Errc::ParseError, "unparsable timestamp '" + std::string(s) + "'");
    };

    if (!s.empty() && std::all_of(s.begin() + (s.front() == '-' ? 1 : 0), s.end(),
                                  [](char c) { return c >= '0' && c <= '9'; })) {
        long long epoch = 0;
        if (!parse_int(s, epoch)) throw bad();
        return Timestamp{seconds{epoch}};
    }

    // YYYY-MM-DD
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw bad();
    int y = 0;
    unsigned mo = 0, d = 0;
    if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), mo) ||
        !parse_int(s.substr(8, 2), d)) {
        throw bad();
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) throw bad();

    long long secs = 0;
    std::string_view rest = s.substr(10);
    if (!rest.empty()) {
        if (rest.front() != 'T' && rest.front() != ' ') throw bad();
        rest.remove_prefix(1);
        int fields[3] = {0, 0, 0};
        for (int f = 0; f < 3 && !rest.empty(); ++f) {
            if (f > 0) {
                if (rest.front() != ':') break;
                rest.remove_prefix(1);
            }
            if (rest.size() < 2 || !parse_int(rest.substr(0, 2), fields[f])) throw bad();
            rest.remove_prefix(2);
        }
        if (!rest.empty() && rest.front() == '.') {  // fractional seconds are ignored
            rest.remove_prefix(1);
            while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') rest.remove_prefix(1);
        }
        if (fields[0] > 24 || fields[1] > 59 || fields[2] > 60) throw bad();
        secs = fields[0] * 3600LL + fields[1] * 60LL + fields[2];

        if (!rest.empty()) {
            if (rest == "Z") {
                rest = {};
            } else if (rest.front() == '+' || rest.front() == '-') {
                const int sign = rest.front() == '-' ? -1 : 1;
                rest.remove_prefix(1);
                int oh = 0, om = 0;
                if (rest.size() < 2 || !parse_int(rest.substr(0, 2), oh)) throw bad();
                rest.remove_prefix(2);
                if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
                if (!rest.empty()) {
                    if (rest.size() != 2 || !parse_int(rest, om)) throw bad();
                }
                secs -= sign * (oh * 3600LL + om * 60LL);
                rest = {};
            } else {
                throw bad();
            }
        }
    }
    return Timestamp{sys_days{ymd}.time_since_epoch() + seconds{secs}};
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

// ---------------------------------------------------------------------------
// CSV

PriceSeries read_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw core_error(Errc::ParseError, "missing header row", 1);
    }
    ++line_no;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split(line, schema.delimiter);
    const auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw core_error(Errc::ParseError, "header has no column '" + name + "'", 1);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t tcol = find_col(schema.time_column);
    const std::size_t pcol = find_col(schema.price_column);

    struct Row {
        Timestamp time;
        double price;
        std::size_t line;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, schema.delimiter);
        if (cells.size() <= std::max(tcol, pcol)) {
            throw core_error(Errc::ParseError, "row has too few columns", line_no);
        }
        Row row{};
        row.line = line_no;
        try {
            row.time = parse_timestamp(cells[tcol]);
        } catch (const Error& e) {
            throw core_error(Errc::ParseError, e.what(), line_no);
        }
        const auto cell = cells[pcol];
        if (is_missing_token(cell)) {
            row.price = kMissing;
        } else {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw core_error(Errc::ParseError, "unparsable price '" + std::string(cell) + "'",
                                 line_no);
            }
            row.price = v;
        }
        rows.push_back(row);
    }
    if (rows.size() < 2) {
        throw core_error(Errc::SeriesTooShort, "need at least two data rows");
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.time < b.time; });

    std::vector<double> values;
    values.reserve(rows.size());
    values.push_back(rows.front().price);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto delta = (rows[i].time - rows[i - 1].time).count();
        if (delta == 0) {
            throw core_error(Errc::DuplicateTimestamp,
                             "duplicate timestamp " + format_timestamp(rows[i].time), rows[i].line);
        }
        if (delta % 3600 != 0) {
            throw core_error(Errc::NonHourlyCadence,
                             "spacing of " + std::to_string(delta) + " s is not a whole number of hours",
                             rows[i].line);
        }
        for (long long k = 1; k < delta / 3600; ++k) values.push_back(kMissing);
        values.push_back(rows[i].price);
    }
    return PriceSeries(schema.market_id, rows.front().time, std::move(values), 1);
}

PriceSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw core_error(Errc::UnreadableFile, "cannot open '" + path.string() + "'");
    }
    return read_csv(in, schema);
}

void write_csv(std::ostream& out, const PriceSeries& series, const CsvSchema& schema) {
    out << schema.time_column << schema.delimiter << schema.price_column << '\n';
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_timestamp(series.time_at(i)) << schema.delimiter;
        const double v = series[i];
        if (std::isnan(v)) {
            out << "NA";
        } else {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Cleaning

std::string_view to_string(GapPolicy policy) noexcept {
    switch (policy) {
        case GapPolicy::LinearInterpolate: return "linear-interpolate";
        case GapPolicy::CarryForward: return "carry-forward";
        case GapPolicy::Fail: return "fail";
    }
    return "";
}

GapPolicy parse_gap_policy(std::string_view text) {
    for (auto p : {GapPolicy::LinearInterpolate, GapPolicy::CarryForward, GapPolicy::Fail}) {
        if (text == to_string(p)) return p;
    }
    throw core_error(Errc::InvalidArgument, "unknown gap policy '" + std::string(text) + "'");
}

PriceSeries clean(const PriceSeries& series, const CleanOptions& options) {
    if (series.is_clean()) return series;

    const auto& gaps = series.gaps();
    if (options.policy == GapPolicy::Fail) {
        throw core_error(Errc::GapsPresent,
                         std::to_string(gaps.size()) + " gap(s) present under the fail policy",
                         gaps.front().start);
    }
    for (const auto& g : gaps) {
        if (g.length > options.max_gap_hours) {
            throw core_error(Errc::GapTooLong,
                             "gap of " + std::to_string(g.length) + " samples at index " +
                                 std::to_string(g.start) + " exceeds the " +
                                 std::to_string(options.max_gap_hours) + "-hour limit",
                             g.start);
        }
    }

    std::vector<double> v(series.values().begin(), series.values().end());
    for (const auto& g : gaps) {
        const bool at_head = g.start == 0;
        const bool at_tail = g.start + g.length == v.size();
        if (options.policy == GapPolicy::CarryForward) {
            if (at_head) {
                throw core_error(Errc::BoundaryGap, "no sample before the leading gap", 0);
            }
            for (std::size_t i = g.start; i < g.start + g.length; ++i) v[i] = v[g.start - 1];
        } else {
            if (at_head || at_tail) {
                throw core_error(Errc::BoundaryGap, "gap at series boundary has no bracketing sample",
                                 g.start);
            }
            const std::size_t left = g.start - 1;
            const std::size_t right = g.start + g.length;
            const double span = static_cast<double>(right - left);
            for (std::size_t i = g.start; i < right; ++i) {
                const double w = static_cast<double>(i - left) / span;
                v[i] = (1.0 - w) * v[left] + w * v[right];
            }
        }
    }
    return PriceSeries(series.market_id(), series.start_time(), std::move(v),
                       series.cadence_hours());
}

// ---------------------------------------------------------------------------
// Peak calendar

PeakCalendar::PeakCalendar(std::bitset<24> on_peak_hours, std::bitset<7> on_peak_weekdays,
                           int timezone_offset_hours)
    : hours_(on_peak_hours), weekdays_(on_peak_weekdays), offset_(timezone_offset_hours) {
    if (hours_.none() || hours_.all()) {
        throw core_error(Errc::InvalidArgument,
                         "on-peak hours must be a nonempty strict subset of 0..23");
    }
    if (offset_ < -23 || offset_ > 23) {
        throw core_error(Errc::InvalidArgument, "timezone offset must lie in [-23, 23] hours");
    }
}

PeakCalendar PeakCalendar::standard() {
    std::bitset<24> hours;
    for (int h = 7; h <= 22; ++h) hours.set(static_cast<std::size_t>(h));
    return PeakCalendar(hours, std::bitset<7>("0011111"), 0);
}

bool PeakCalendar::is_on_peak(Timestamp utc) const {
    using namespace std::chrono;
    const auto local = utc + hours(offset_);
    const auto day_point = floor<days>(local);
    const auto hour = floor<hours>(local - day_point).count();
    const unsigned iso = weekday{day_point}.iso_encoding();  // 1 = Monday
    return hours_.test(static_cast<std::size_t>(hour)) && weekdays_.test(iso - 1);
}

PeakSplit split_peak(const PriceSeries& series, const PeakCalendar& calendar) {
    require_clean(series, kModule);
    std::vector<double> on, off;
    std::optional<Timestamp> on_start, off_start;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto t = series.time_at(i);
        if (calendar.is_on_peak(t)) {
            if (!on_start) on_start = t;
            on.push_back(series[i]);
        } else {
            if (!off_start) off_start = t;
            off.push_back(series[i]);
        }
    }
    if (on.size() < 2 || off.size() < 2) {
        throw core_error(Errc::SeriesTooShort,
                         "peak split leaves fewer than two samples in one subset");
    }
    return PeakSplit{
        PriceSeries(series.market_id(), *on_start, std::move(on), series.cadence_hours()),
        PriceSeries(series.market_id(), *off_start, std::move(off), series.cadence_hours())};
}

// ---------------------------------------------------------------------------
// Aggregation

std::vector<double> bin_means(std::span<const double> values, std::size_t n) {
    if (n == 0) throw core_error(Errc::InvalidScale, "aggregation width must be at least 1");
    const std::size_t bins = values.size() / n;
    std::vector<double> out(bins);
    for (std::size_t m = 0; m < bins; ++m) {
        double sum = 0.0;
        for (std::size_t k = m * n; k < (m + 1) * n; ++k) sum += values[k];
        out[m] = sum / static_cast<double>(n);
    }
    return out;
}

AggregatedSeries aggregate(const PriceSeries& series, std::size_t n) {
    require_clean(series, kModule);
    if (n < 1 || n > series.size() / 2) {
        throw core_error(Errc::InvalidScale, "aggregation width " + std::to_string(n) +
                                                 " outside [1, " +
                                                 std::to_string(series.size() / 2) + "]");
    }
    AggregatedSeries out;
    out.market_id = series.market_id();
    out.source_length = series.size();
    out.scale_n = n;
    out.bin_means = bin_means(series.values(), n);
    return out;
}

}  // namespace pricescale
