#include "pricescale/pipeline.hpp"

#include "pricescale/error.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>

namespace pricescale {

namespace {

using nlohmann::json;

constexpr const char* kModule = "cli";

bool is_size_limited(Errc code) {
    return code == Errc::InsufficientBins || code == Errc::EmptyFitRange ||
           code == Errc::SeriesTooShort || code == Errc::InvalidScale ||
           code == Errc::EmptySample;
}

// ---------------------------------------------------------------------------
// Analyses

void run_dfa(const PriceSeries& s, const AnalysisConfig& cfg, SeriesResult& out) {
    out.dfa_scales = dfa::default_scales(s.size(), cfg.dfa.scale_min, cfg.dfa.scale_max,
                                         cfg.dfa.scale_count);
    const auto profile = dfa::integrate_profile(s);
    out.fluctuation =
        dfa::fluctuation_function(profile, out.dfa_scales, dfa::Options{cfg.dfa.both_ends});
    out.local_exponents = dfa::local_exponents(out.fluctuation, cfg.dfa.bins_per_decade);
    out.dfa = dfa::summary_exponents(out.local_exponents);
}

void run_spectral(const PriceSeries& s, const AnalysisConfig& cfg, SeriesResult& out) {
    out.spectrum = spectral::periodogram(s, cfg.spectral.window);
    auto range = spectral::full_range(out.spectrum);
    if (cfg.spectral.fit_fmin > 0.0) range.lo = cfg.spectral.fit_fmin;
    if (cfg.spectral.fit_fmax > 0.0) range.hi = cfg.spectral.fit_fmax;
    spectral::FitOptions options;
    options.bins_per_decade = cfg.spectral.bins_per_decade;
    try {
        out.beta = spectral::spectral_exponent(out.spectrum, range, cfg.spectral.exclude_periods,
                                               options);
    } catch (const Error& e) {
        if (!is_size_limited(e.code())) throw;
        out.skipped.push_back({"spectral", e.what()});
    }

    std::vector<double> periods;
    const double T = out.spectrum.record_length;
    for (double p : cfg.spectral.cycle_periods) {
        if (p > 2.0 && p < T / 2.0) {
            periods.push_back(p);
        } else {
            char buf[32];
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
            out.skipped.push_back({"cycles", "period " + std::string(buf, end) +
                                                 " h lies outside (2, T/2) for T = " +
                                                 std::to_string(static_cast<long long>(T)) + " h"});
        }
    }
    if (!periods.empty()) out.cycles = spectral::detect_cycles(out.spectrum, periods);
}

void run_pareto(const PriceSeries& s, const AnalysisConfig& cfg, SeriesResult& out) {
    const auto ranges = cfg.pareto.ranges();
    try {
        out.histogram =
            pareto::histogram(s, cfg.pareto.bin_width, {ranges[0].lo, ranges[1].hi});
    } catch (const Error& e) {
        if (e.code() != Errc::EmptySample) throw;
    }
    out.pareto = pareto::two_range_report(s, ranges, cfg.pareto.bin_width, cfg.pareto.weighting);
    for (std::size_t k = 0; k < 2; ++k) {
        if (!out.pareto.estimates[k]) {
            out.skipped.push_back({"pareto", std::string(k == 0 ? "lower" : "upper") +
                                                 " range has fewer than 5 nonzero bins"});
        }
    }
}

void run_increments(const PriceSeries& s, const AnalysisConfig& cfg, SeriesResult& out) {
    increments::BinningOptions options;
    options.bin_count = cfg.increments.bin_count;
    options.min_occupancy = cfg.increments.min_occupancy;
    options.clip_quantile = cfg.increments.clip_quantile;

    for (std::size_t n : cfg.increments.scales) {
        const std::string name = "increments n=" + std::to_string(n);
        IncrementResult r;
        r.scale_n = n;
        try {
            const auto incs = increments::multiscale_increments(s, n);
            r.pairs = increments::lag_pairs(incs);
            const double eps = cfg.increments.epsilon > 0.0 ? cfg.increments.epsilon
                                                            : increments::default_epsilon(incs);
            r.scenarios = increments::classify_scenarios(r.pairs, eps);
        } catch (const Error& e) {
            if (!is_size_limited(e.code())) throw;
            out.skipped.push_back({name, e.what()});
            continue;
        }
        if (r.pairs.pairs.size() >= 100) {
            r.curve = increments::binned_regression(r.pairs, options);
        } else {
            out.skipped.push_back({name, "binned curve needs 100 pairs, have " +
                                             std::to_string(r.pairs.pairs.size())});
        }
        out.increments.push_back(std::move(r));
    }
}

// ---------------------------------------------------------------------------
// JSON

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json slope_json(const std::optional<increments::SlopeFit>& s) {
    if (!s) return nullptr;
    return {{"slope", number_or_null(s->slope)},
            {"slope_err", number_or_null(s->slope_err)},
            {"bins", s->bins}};
}

std::string dominant_scenario(const increments::ScenarioCounts& c) {
    const std::pair<const char*, std::size_t> all[] = {
        {"I", c.rise_then_fall},
        {"II", c.stable_then_rise},
        {"III", c.fall_then_stable},
        {"IV", c.rise_then_rise}};
    const char* best = "none";
    std::size_t most = 0;
    for (const auto& [name, count] : all) {
        if (count > most) {
            most = count;
            best = name;
        }
    }
    return best;
}

json series_json(const SeriesResult& r) {
    json j;
    j["label"] = r.label;
    j["samples"] = r.samples;
    j["dfa"] = {{"alpha_mean", number_or_null(r.dfa.alpha_mean)},
                {"alpha_mean_err", number_or_null(r.dfa.alpha_mean_err)},
                {"alpha_max", number_or_null(r.dfa.alpha_max)},
                {"alpha_max_err", number_or_null(r.dfa.alpha_max_err)},
                {"bins", r.dfa.bins},
                {"scale_min", r.dfa_scales.empty() ? 0 : r.dfa_scales.front()},
                {"scale_max", r.dfa_scales.empty() ? 0 : r.dfa_scales.back()}};

    if (r.beta) {
        const auto& b = *r.beta;
        j["spectral"] = {{"beta", number_or_null(b.beta)},
                         {"beta_err", number_or_null(b.beta_err)},
                         {"fit_fmin", b.fit_range.lo},
                         {"fit_fmax", b.fit_range.hi},
                         {"alpha_theor", number_or_null(b.alpha_theor)},
                         {"alpha_theor_err", number_or_null(b.alpha_theor_err)},
                         {"alpha_theor_spread", number_or_null(b.alpha_theor_spread)},
                         {"bins_used", b.bins_used},
                         {"window", spectral::to_string(r.spectrum.window)},
                         {"samples_used", r.spectrum.samples_used},
                         {"samples_dropped", r.spectrum.samples_dropped}};
    } else {
        j["spectral"] = nullptr;
    }

    j["cycles"] = json::array();
    for (const auto& c : r.cycles.entries) {
        j["cycles"].push_back({{"period_hours", c.period_hours},
                               {"peak_power", number_or_null(c.peak_power)},
                               {"background_power", number_or_null(c.background_power)},
                               {"significance", number_or_null(c.significance)}});
    }

    json ranges = json::array();
    for (std::size_t k = 0; k < 2; ++k) {
        json range = {{"lo", r.pareto.ranges[k].lo}, {"hi", r.pareto.ranges[k].hi}};
        if (const auto& e = r.pareto.estimates[k]) {
            range["estimate"] = {{"gamma", number_or_null(e->gamma)},
                                 {"gamma_err", number_or_null(e->gamma_err)},
                                 {"bins_used", e->bins_used},
                                 {"moment_class", pareto::to_string(pareto::classify_moments(*e))}};
        } else {
            range["estimate"] = nullptr;
        }
        ranges.push_back(std::move(range));
    }
    j["pareto"] = {{"ranges", std::move(ranges)}};

    j["increments"] = json::array();
    for (const auto& inc : r.increments) {
        json item = {{"scale_n", inc.scale_n}, {"pairs", inc.pairs.pairs.size()}};
        if (inc.curve) {
            item["binned"] = {{"clip", inc.curve->clip},
                              {"bins", inc.curve->counts.size()},
                              {"q4_slope", slope_json(inc.curve->q4_slope)},
                              {"q1_slope", slope_json(inc.curve->q1_slope)}};
        } else {
            item["binned"] = nullptr;
        }
        const auto& c = inc.scenarios;
        item["scenarios"] = {{"epsilon", c.epsilon},
                             {"I", c.rise_then_fall},
                             {"II", c.stable_then_rise},
                             {"III", c.fall_then_stable},
                             {"IV", c.rise_then_rise},
                             {"unclassified", c.unclassified},
                             {"dominant", dominant_scenario(c)}};
        j["increments"].push_back(std::move(item));
    }

    j["skipped"] = json::array();
    for (const auto& s : r.skipped) {
        j["skipped"].push_back({{"analysis", s.analysis}, {"reason", s.reason}});
    }
    return j;
}

std::string utc_now() {
    const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    return format_timestamp(now) + "Z";
}

// ---------------------------------------------------------------------------
// CSV artifacts

std::string num(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::ofstream open_artifact(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::UnreadableFile, kModule, "cannot write " + path.string());
    return out;
}

void write_series_csv(const std::filesystem::path& dir, const SeriesResult& r) {
    const auto file = [&](const std::string& analysis) {
        return open_artifact(dir / (r.label + "_" + analysis + ".csv"));
    };
    {
        auto out = file("dfa");
        out << "n,F\n";
        for (std::size_t i = 0; i < r.fluctuation.scales.size(); ++i) {
            out << r.fluctuation.scales[i] << ',' << num(r.fluctuation.F[i]) << '\n';
        }
    }
    {
        auto out = file("alpha");
        out << "bin_center,alpha,alpha_err\n";
        const auto& a = r.local_exponents;
        for (std::size_t i = 0; i < a.bin_centers.size(); ++i) {
            out << num(a.bin_centers[i]) << ',' << num(a.alpha_local[i]) << ','
                << num(a.alpha_err[i]) << '\n';
        }
    }
    {
        auto out = file("spectrum");
        out << "f,S\n";
        for (std::size_t i = 0; i < r.spectrum.frequencies.size(); ++i) {
            out << num(r.spectrum.frequencies[i]) << ',' << num(r.spectrum.power[i]) << '\n';
        }
    }
    if (r.histogram) {
        auto out = file("histogram");
        out << "bin_center,density\n";
        for (std::size_t i = 0; i < r.histogram->bins(); ++i) {
            out << num(r.histogram->bin_center(i)) << ',' << num(r.histogram->density()[i]) << '\n';
        }
    }
    for (const auto& inc : r.increments) {
        const std::string suffix = "_n" + std::to_string(inc.scale_n);
        {
            auto out = file("pairs" + suffix);
            out << "prev,curr\n";
            for (const auto& p : inc.pairs.pairs) out << num(p.prev) << ',' << num(p.curr) << '\n';
        }
        if (inc.curve) {
            auto out = file("binned" + suffix);
            out << "bin_center,mean_prev,mean_curr,count\n";
            const auto& c = *inc.curve;
            for (std::size_t i = 0; i < c.counts.size(); ++i) {
                out << num(c.prev_bin_centers[i]) << ',' << num(c.mean_prev[i]) << ','
                    << num(c.mean_curr[i]) << ',' << c.counts[i] << '\n';
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Report validation

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw Error(Errc::SchemaMismatch, "report", where + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) schema_error(where, "missing '" + key + "'");
    return obj.at(key);
}

void expect_number(const json& obj, const std::string& key, const std::string& where,
                   bool nullable = false) {
    const auto& v = field(obj, key, where);
    if (!(v.is_number() || (nullable && v.is_null()))) {
        schema_error(where, "'" + key + "' must be a number");
    }
}

void expect_string(const json& obj, const std::string& key, const std::string& where) {
    if (!field(obj, key, where).is_string()) schema_error(where, "'" + key + "' must be a string");
}

void expect_array(const json& obj, const std::string& key, const std::string& where) {
    if (!field(obj, key, where).is_array()) schema_error(where, "'" + key + "' must be an array");
}

void expect_slope(const json& v, const std::string& where) {
    if (v.is_null()) return;
    for (const char* k : {"slope", "slope_err", "bins"}) expect_number(v, k, where, true);
}

}  // namespace

// ---------------------------------------------------------------------------

SeriesResult analyze_series(const PriceSeries& series, const std::string& label,
                            const AnalysisConfig& config) {
    SeriesResult out;
    out.label = label;
    out.samples = series.size();
    try {
        run_dfa(series, config, out);
        run_spectral(series, config, out);
        run_pareto(series, config, out);
        run_increments(series, config, out);
    } catch (Error& e) {
        e.with_series(label);
        throw;
    }
    return out;
}

Report run_analysis(const PriceSeries& raw, const AnalysisConfig& config) {
    validate_config(config);
    Report report;
    report.tool_version = PRICESCALE_VERSION;
    report.generated_at = utc_now();
    report.market_id = raw.market_id();
    report.input_samples = raw.size();
    report.start_time = format_timestamp(raw.start_time());
    report.config = config;
    for (const auto& g : raw.gaps()) report.filled_samples += g.length;

    std::vector<std::pair<std::string, PriceSeries>> work;
    try {
        auto cleaned = clean(raw, {config.input.gap_policy, config.input.max_gap_hours});
        if (config.peak.enabled) {
            auto split = split_peak(cleaned, config.peak.calendar());
            work.emplace_back("all", std::move(cleaned));
            work.emplace_back("on_peak", std::move(split.on));
            work.emplace_back("off_peak", std::move(split.off));
        } else {
            work.emplace_back("all", std::move(cleaned));
        }
    } catch (Error& e) {
        e.with_series("all");
        throw;
    }

    std::vector<std::future<SeriesResult>> jobs;
    jobs.reserve(work.size());
    for (const auto& [label, series] : work) {
        jobs.push_back(std::async(std::launch::async, [&series = series, &label = label, &config] {
            return analyze_series(series, label, config);
        }));
    }
    // Collect every job before rethrowing so no task outlives `work`.
    std::exception_ptr first_error;
    for (auto& job : jobs) {
        try {
            report.series.push_back(job.get());
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return report;
}

Report run_analysis(const AnalysisConfig& config) {
    if (config.input.path.empty()) {
        throw Error(Errc::InvalidArgument, kModule, "no input path given (input.path or --input)");
    }
    return run_analysis(load_csv(config.input.path, config.input.schema()), config);
}

nlohmann::json to_json(const Report& report) {
    json j;
    j["schema_version"] = report.schema_version;
    j["tool"] = "pricescale";
    j["tool_version"] = report.tool_version;
    j["generated_at"] = report.generated_at;
    j["market_id"] = report.market_id;
    j["input"] = {{"samples", report.input_samples},
                  {"filled_samples", report.filled_samples},
                  {"start_time", report.start_time}};
    json cfg = json::object();
    for (const auto& [section, entries] : config_entries(report.config)) {
        json sec = json::object();
        for (const auto& [k, v] : entries) sec[k] = v;
        cfg[section] = std::move(sec);
    }
    j["config"] = std::move(cfg);
    j["series"] = json::array();
    for (const auto& s : report.series) j["series"].push_back(series_json(s));
    return j;
}

void validate_report(const nlohmann::json& doc) {
    const std::string top = "report";
    if (!doc.is_object()) schema_error(top, "document is not an object");
    const auto& version = field(doc, "schema_version", top);
    if (!version.is_number_integer()) schema_error(top, "'schema_version' must be an integer");
    if (version.get<int>() != kReportSchemaVersion) {
        schema_error(top, "schema_version " + version.dump() + " is not supported (expected " +
                              std::to_string(kReportSchemaVersion) + ")");
    }
    expect_string(doc, "tool_version", top);
    expect_string(doc, "generated_at", top);
    expect_string(doc, "market_id", top);
    if (!field(doc, "config", top).is_object()) schema_error(top, "'config' must be an object");
    expect_array(doc, "series", top);
    const auto& series = doc.at("series");
    if (series.size() != 1 && series.size() != 3) {
        schema_error(top, "expected 1 or 3 series blocks, found " + std::to_string(series.size()));
    }
    for (const auto& s : series) {
        expect_string(s, "label", top + ".series");
        const std::string where = top + ".series[" + s.at("label").get<std::string>() + "]";
        expect_number(s, "samples", where);

        const auto& d = field(s, "dfa", where);
        for (const char* k : {"alpha_mean", "alpha_mean_err", "alpha_max", "alpha_max_err"}) {
            expect_number(d, k, where + ".dfa", true);
        }
        expect_number(d, "bins", where + ".dfa");

        const auto& sp = field(s, "spectral", where);
        if (!sp.is_null()) {
            for (const char* k : {"beta", "beta_err", "alpha_theor", "alpha_theor_err",
                                  "alpha_theor_spread"}) {
                expect_number(sp, k, where + ".spectral", true);
            }
            expect_number(sp, "bins_used", where + ".spectral");
        }

        expect_array(s, "cycles", where);
        for (const auto& c : s.at("cycles")) {
            expect_number(c, "period_hours", where + ".cycles");
            expect_number(c, "significance", where + ".cycles", true);
        }

        const auto& ranges = field(field(s, "pareto", where), "ranges", where + ".pareto");
        if (!ranges.is_array() || ranges.size() != 2) {
            schema_error(where + ".pareto", "'ranges' must hold two entries");
        }
        for (const auto& r : ranges) {
            expect_number(r, "lo", where + ".pareto");
            expect_number(r, "hi", where + ".pareto");
            const auto& e = field(r, "estimate", where + ".pareto");
            if (!e.is_null()) {
                expect_number(e, "gamma", where + ".pareto", true);
                expect_number(e, "gamma_err", where + ".pareto", true);
                expect_string(e, "moment_class", where + ".pareto");
            }
        }

        expect_array(s, "increments", where);
        for (const auto& inc : s.at("increments")) {
            expect_number(inc, "scale_n", where + ".increments");
            const auto& b = field(inc, "binned", where + ".increments");
            if (!b.is_null()) {
                expect_slope(field(b, "q4_slope", where + ".increments"), where + ".increments");
                expect_slope(field(b, "q1_slope", where + ".increments"), where + ".increments");
            }
            const auto& sc = field(inc, "scenarios", where + ".increments");
            for (const char* k : {"I", "II", "III", "IV", "unclassified"}) {
                expect_number(sc, k, where + ".increments.scenarios");
            }
        }
        expect_array(s, "skipped", where);
    }
}

void write_outputs(const Report& report) {
    const auto& dir = report.config.output.dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(Errc::UnreadableFile, kModule,
                    "cannot create output directory " + dir.string() + ": " + ec.message());
    }
    {
        auto out = open_artifact(dir / "report.json");
        out << to_json(report).dump(2) << '\n';
    }
    if (report.config.output.csv) {
        for (const auto& s : report.series) write_series_csv(dir, s);
    }
}

Report cmd_analyze(const AnalysisConfig& config) {
    Report report = run_analysis(config);
    write_outputs(report);
    return report;
}

}  // namespace pricescale
