#include "pricescale/config.hpp"

#include "pricescale/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace pricescale {

namespace {

constexpr const char* kModule = "cli";

Error bad_value(std::string_view section, std::string_view key, std::string_view value,
                std::string_view expected) {
    return Error(Errc::InvalidArgument, kModule,
                 std::string(section) + "." + std::string(key) + ": expected " +
                     std::string(expected) + ", got '" + std::string(value) + "'");
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (trim(s).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

// --- scalar conversions ----------------------------------------------------

template <class T>
bool from_text(std::string_view s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && first != last;
}

std::string fmt_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
std::string fmt_list(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt_double(xs[i]);
        } else {
            out += std::to_string(xs[i]);
        }
    }
    return out;
}

template <std::size_t N>
std::string fmt_set(const std::bitset<N>& bits) {
    std::string out;
    std::size_t i = 0;
    while (i < N) {
        if (!bits[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < N && bits[j + 1]) ++j;
        if (!out.empty()) out += ",";
        out += std::to_string(i);
        if (j > i) out += "-" + std::to_string(j);
        i = j + 1;
    }
    return out;
}

template <std::size_t N>
std::optional<std::bitset<N>> parse_set(std::string_view text) {
    std::bitset<N> bits;
    for (auto item : split(text, ',')) {
        const auto dash = item.find('-');
        std::size_t lo = 0, hi = 0;
        if (dash == std::string_view::npos) {
            if (!from_text(item, lo)) return std::nullopt;
            hi = lo;
        } else if (!from_text(trim(item.substr(0, dash)), lo) ||
                   !from_text(trim(item.substr(dash + 1)), hi)) {
            return std::nullopt;
        }
        if (lo > hi || hi >= N) return std::nullopt;
        for (std::size_t k = lo; k <= hi; ++k) bits.set(k);
    }
    return bits;
}

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    return std::nullopt;
}

std::string fmt_delimiter(char c) {
    if (c == '\t') return "tab";
    if (c == ' ') return "space";
    return std::string(1, c);
}

std::string_view fmt_weighting(pareto::Weighting w) {
    return w == pareto::Weighting::CountWeighted ? "counts" : "none";
}

// --- field table -------------------------------------------------------------

struct Field {
    const char* section;
    const char* key;
    const char* doc;
    std::function<std::string(const AnalysisConfig&)> get;
    std::function<void(AnalysisConfig&, std::string_view)> set;
};

template <class T>
T need_number(std::string_view section, std::string_view key, std::string_view v) {
    T out{};
    if (!from_text(v, out)) {
        throw bad_value(section, key, v, std::is_floating_point_v<T> ? "a number" : "an integer");
    }
    return out;
}

template <class T>
std::vector<T> need_list(std::string_view section, std::string_view key, std::string_view v) {
    std::vector<T> out;
    for (auto item : split(v, ',')) out.push_back(need_number<T>(section, key, item));
    return out;
}

bool need_bool(std::string_view section, std::string_view key, std::string_view v) {
    if (auto b = parse_bool(v)) return *b;
    throw bad_value(section, key, v, "true or false");
}

#define NUMBER_FIELD(SEC, KEY, MEMBER, DOC)                                              \
    Field {                                                                              \
        #SEC, #KEY, DOC,                                                                 \
            [](const AnalysisConfig& c) {                                                \
                if constexpr (std::is_floating_point_v<decltype(c.SEC.MEMBER)>) {        \
                    return fmt_double(c.SEC.MEMBER);                                     \
                } else {                                                                 \
                    return std::to_string(c.SEC.MEMBER);                                 \
                }                                                                        \
            },                                                                           \
            [](AnalysisConfig& c, std::string_view v) {                                  \
                c.SEC.MEMBER = need_number<decltype(c.SEC.MEMBER)>(#SEC, #KEY, v);       \
            }                                                                            \
    }

#define BOOL_FIELD(SEC, KEY, MEMBER, DOC)                                                   \
    Field {                                                                                 \
        #SEC, #KEY, DOC,                                                                    \
            [](const AnalysisConfig& c) { return std::string(c.SEC.MEMBER ? "true" : "false"); }, \
            [](AnalysisConfig& c, std::string_view v) { c.SEC.MEMBER = need_bool(#SEC, #KEY, v); } \
    }

#define STRING_FIELD(SEC, KEY, MEMBER, DOC)                                             \
    Field {                                                                             \
        #SEC, #KEY, DOC, [](const AnalysisConfig& c) { return std::string(c.SEC.MEMBER); }, \
            [](AnalysisConfig& c, std::string_view v) { c.SEC.MEMBER = std::string(v); } \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table{
        Field{"input", "path", "CSV file with one price per row (required for analyze). Default: empty",
              [](const AnalysisConfig& c) { return c.input.path.string(); },
              [](AnalysisConfig& c, std::string_view v) { c.input.path = std::string(v); }},
        STRING_FIELD(input, market_id, market_id, "Label used in reports. Default: market"),
        STRING_FIELD(input, time_column, time_column,
                     "Header of the timestamp column (ISO-8601 or epoch seconds). Default: timestamp"),
        STRING_FIELD(input, price_column, price_column, "Header of the price column. Default: price"),
        Field{"input", "delimiter", "Field separator: a single character, `tab` or `space`. Default: ,",
              [](const AnalysisConfig& c) { return fmt_delimiter(c.input.delimiter); },
              [](AnalysisConfig& c, std::string_view v) {
                  if (v == "tab") {
                      c.input.delimiter = '\t';
                  } else if (v == "space") {
                      c.input.delimiter = ' ';
                  } else if (v.size() == 1) {
                      c.input.delimiter = v[0];
                  } else {
                      throw bad_value("input", "delimiter", v, "one character, tab or space");
                  }
              }},
        Field{"input", "gap_policy",
              "Missing hours: linear-interpolate, carry-forward or fail. Default: linear-interpolate",
              [](const AnalysisConfig& c) { return std::string(to_string(c.input.gap_policy)); },
              [](AnalysisConfig& c, std::string_view v) { c.input.gap_policy = parse_gap_policy(v); }},
        NUMBER_FIELD(input, max_gap_hours, max_gap_hours,
                     "Longest gap that may be filled, in hours. Default: 6"),

        BOOL_FIELD(peak, enabled, enabled,
                   "Also analyze on-peak and off-peak subsets. Default: true"),
        Field{"peak", "hours",
              "On-peak hour-beginning values in local time, 0-23. Default: 7-22",
              [](const AnalysisConfig& c) { return fmt_set(c.peak.hours); },
              [](AnalysisConfig& c, std::string_view v) {
                  auto bits = parse_set<24>(v);
                  if (!bits) throw bad_value("peak", "hours", v, "hours 0-23 such as 7-22");
                  c.peak.hours = *bits;
              }},
        Field{"peak", "weekdays", "On-peak weekdays, 0 = Monday ... 6 = Sunday. Default: 0-4",
              [](const AnalysisConfig& c) { return fmt_set(c.peak.weekdays); },
              [](AnalysisConfig& c, std::string_view v) {
                  auto bits = parse_set<7>(v);
                  if (!bits) throw bad_value("peak", "weekdays", v, "weekdays 0-6 such as 0-4");
                  c.peak.weekdays = *bits;
              }},
        NUMBER_FIELD(peak, tz_offset_hours, timezone_offset_hours,
                     "Fixed offset of local market time from UTC, in hours. Default: 0"),

        NUMBER_FIELD(dfa, scale_min, scale_min, "Smallest box size in hours. Default: 4"),
        NUMBER_FIELD(dfa, scale_max, scale_max,
                     "Largest box size in hours, capped at N/4. Default: 720"),
        NUMBER_FIELD(dfa, scale_count, scale_count, "Log-spaced box sizes before rounding. Default: 60"),
        NUMBER_FIELD(dfa, bins_per_decade, bins_per_decade,
                     "Bins per decade for local exponents. Default: 8"),
        BOOL_FIELD(dfa, both_ends, both_ends,
                   "Average box partitions from head and tail. Default: false"),

        NUMBER_FIELD(spectral, fit_fmin, fit_fmin,
                     "Lower fit frequency in 1/h; 0 means 1/T. Default: 0"),
        NUMBER_FIELD(spectral, fit_fmax, fit_fmax,
                     "Upper fit frequency in 1/h; 0 means Nyquist. Default: 0"),
        Field{"spectral", "exclude_periods",
              "Periods in hours removed from the fit with 3 harmonics. Default: 24, 168",
              [](const AnalysisConfig& c) { return fmt_list(c.spectral.exclude_periods); },
              [](AnalysisConfig& c, std::string_view v) {
                  c.spectral.exclude_periods = need_list<double>("spectral", "exclude_periods", v);
              }},
        Field{"spectral", "cycle_periods", "Periods in hours tested for cycles. Default: 24, 168",
              [](const AnalysisConfig& c) { return fmt_list(c.spectral.cycle_periods); },
              [](AnalysisConfig& c, std::string_view v) {
                  c.spectral.cycle_periods = need_list<double>("spectral", "cycle_periods", v);
              }},
        Field{"spectral", "window", "Taper: rectangular or hann. Default: rectangular",
              [](const AnalysisConfig& c) { return std::string(spectral::to_string(c.spectral.window)); },
              [](AnalysisConfig& c, std::string_view v) { c.spectral.window = spectral::parse_window(v); }},
        NUMBER_FIELD(spectral, bins_per_decade, bins_per_decade,
                     "Log bins per decade for the slope fit. Default: 8"),

        NUMBER_FIELD(pareto, bin_width, bin_width, "Histogram bin width in price units. Default: 5"),
        Field{"pareto", "ranges",
              "Edges lo, mid, hi of the lower [lo, mid] and upper [mid, hi] fit ranges. "
              "Default: 1, 200, 1000",
              [](const AnalysisConfig& c) {
                  return fmt_list(std::vector<double>(c.pareto.range_edges.begin(),
                                                      c.pareto.range_edges.end()));
              },
              [](AnalysisConfig& c, std::string_view v) {
                  auto xs = need_list<double>("pareto", "ranges", v);
                  if (xs.size() != 3) throw bad_value("pareto", "ranges", v, "three edges");
                  std::copy(xs.begin(), xs.end(), c.pareto.range_edges.begin());
              }},
        Field{"pareto", "weighting", "Log-log fit weights: none or counts. Default: none",
              [](const AnalysisConfig& c) { return std::string(fmt_weighting(c.pareto.weighting)); },
              [](AnalysisConfig& c, std::string_view v) {
                  if (v == "none") {
                      c.pareto.weighting = pareto::Weighting::Unweighted;
                  } else if (v == "counts") {
                      c.pareto.weighting = pareto::Weighting::CountWeighted;
                  } else {
                      throw bad_value("pareto", "weighting", v, "none or counts");
                  }
              }},

        Field{"increments", "scales", "Aggregation widths in hours. Default: 1, 12, 24, 168, 720",
              [](const AnalysisConfig& c) { return fmt_list(c.increments.scales); },
              [](AnalysisConfig& c, std::string_view v) {
                  c.increments.scales = need_list<std::size_t>("increments", "scales", v);
              }},
        NUMBER_FIELD(increments, bin_count, bin_count,
                     "Bins of the preceding increment for the binned curve. Default: 40"),
        NUMBER_FIELD(increments, min_occupancy, min_occupancy,
                     "Pairs a bin needs to enter a slope fit. Default: 10"),
        NUMBER_FIELD(increments, clip_quantile, clip_quantile,
                     "Quantile of |previous increment| bounding the bins. Default: 0.995"),
        NUMBER_FIELD(increments, epsilon, epsilon,
                     "Stability threshold; 0 means half the median absolute deviation. Default: 0"),

        Field{"output", "dir", "Run directory for report.json and CSV files. Default: pricescale-out",
              [](const AnalysisConfig& c) { return c.output.dir.string(); },
              [](AnalysisConfig& c, std::string_view v) { c.output.dir = std::string(v); }},
        BOOL_FIELD(output, csv, csv, "Write per-analysis CSV files. Default: true"),
    };
    return table;
}

#undef NUMBER_FIELD
#undef BOOL_FIELD
#undef STRING_FIELD

const Field* find_field(std::string_view section, std::string_view key) {
    for (const auto& f : fields()) {
        if (section == f.section && key == f.key) return &f;
    }
    return nullptr;
}

}  // namespace

void set_config_value(AnalysisConfig& config, std::string_view section, std::string_view key,
                      std::string_view value) {
    const Field* f = find_field(section, key);
    if (!f) {
        throw Error(Errc::InvalidArgument, kModule,
                    "unknown setting " + std::string(section) + "." + std::string(key));
    }
    f->set(config, trim(value));
}

void apply_override(AnalysisConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw Error(Errc::InvalidArgument, kModule,
                    "override '" + std::string(assignment) + "' is not section.key=value");
    }
    set_config_value(config, trim(assignment.substr(0, dot)),
                     trim(assignment.substr(dot + 1, eq - dot - 1)), assignment.substr(eq + 1));
}

AnalysisConfig parse_config(std::istream& in) {
    AnalysisConfig config;
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#' || text.front() == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw Error(Errc::InvalidArgument, kModule, "unterminated section header", lineno);
            }
            section = std::string(trim(text.substr(1, text.size() - 2)));
            const auto& all = fields();
            if (std::none_of(all.begin(), all.end(), [&](const Field& f) { return f.section == section; })) {
                throw Error(Errc::InvalidArgument, kModule, "unknown section [" + section + "]", lineno);
            }
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::InvalidArgument, kModule, "expected key = value", lineno);
        }
        if (section.empty()) {
            throw Error(Errc::InvalidArgument, kModule, "setting outside of a [section]", lineno);
        }
        try {
            set_config_value(config, section, trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(e.code(), kModule, e.what(), lineno);
        }
    }
    return config;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::UnreadableFile, kModule, "cannot open config " + path.string());
    }
    return parse_config(in);
}

std::string format_config(const AnalysisConfig& config) {
    std::ostringstream out;
    out << "# pricescale analysis configuration\n";
    std::string_view section;
    for (const auto& f : fields()) {
        if (section != f.section) {
            section = f.section;
            out << "\n[" << section << "]\n";
        }
        out << "# " << f.doc << "\n" << f.key << " = " << f.get(config) << "\n";
    }
    return out.str();
}

std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
config_entries(const AnalysisConfig& config) {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> out;
    for (const auto& f : fields()) {
        if (out.empty() || out.back().first != f.section) out.push_back({f.section, {}});
        out.back().second.emplace_back(f.key, f.get(config));
    }
    return out;
}

void validate_config(const AnalysisConfig& c) {
    const auto fail = [](const std::string& msg) {
        throw Error(Errc::InvalidArgument, kModule, msg);
    };
    if (c.dfa.scale_min < 4) fail("dfa.scale_min must be at least 4");
    if (c.dfa.scale_max <= c.dfa.scale_min) fail("dfa.scale_max must exceed dfa.scale_min");
    if (c.dfa.scale_count < 2) fail("dfa.scale_count must be at least 2");
    if (c.dfa.bins_per_decade < 1) fail("dfa.bins_per_decade must be at least 1");
    if (c.spectral.fit_fmin < 0.0 || c.spectral.fit_fmax < 0.0) {
        fail("spectral fit frequencies must be non-negative");
    }
    if (c.spectral.fit_fmax > 0.0 && c.spectral.fit_fmax <= c.spectral.fit_fmin) {
        fail("spectral.fit_fmax must exceed spectral.fit_fmin");
    }
    for (double p : c.spectral.exclude_periods) {
        if (!(p > 0.0)) fail("spectral.exclude_periods must be positive");
    }
    if (c.spectral.bins_per_decade < 1) fail("spectral.bins_per_decade must be at least 1");
    if (!(c.pareto.bin_width > 0.0)) fail("pareto.bin_width must be positive");
    const auto& e = c.pareto.range_edges;
    if (!(e[0] >= 0.0 && e[0] < e[1] && e[1] < e[2])) {
        fail("pareto.ranges must be ascending non-negative edges");
    }
    if (c.increments.scales.empty()) fail("increments.scales must not be empty");
    for (auto n : c.increments.scales) {
        if (n < 1) fail("increments.scales must be at least 1");
    }
    if (c.increments.bin_count < 10) fail("increments.bin_count must be at least 10");
    if (!(c.increments.clip_quantile > 0.0 && c.increments.clip_quantile <= 1.0)) {
        fail("increments.clip_quantile must lie in (0, 1]");
    }
    if (!(c.increments.epsilon >= 0.0)) fail("increments.epsilon must be non-negative");
    if (c.peak.enabled) (void)c.peak.calendar();
}

}  // namespace pricescale
