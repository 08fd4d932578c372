// pricescale: scaling analysis of hourly price series.
//
//   pricescale analyze --config run.ini [--input prices.csv] [--out dir] [--set dfa.both_ends=true]
//   pricescale synth --kind fbm --param hurst=0.8 --length 32768 --seed 7 --out fbm.csv
//   pricescale report runA/report.json runB/report.json [--csv table.csv]
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include "pricescale/config.hpp"
#include "pricescale/error.hpp"
#include "pricescale/pipeline.hpp"
#include "pricescale/report_table.hpp"
#include "pricescale/series.hpp"
#include "pricescale/synth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace ps = pricescale;

namespace {

struct AnalyzeArgs {
    std::string config_path;
    std::string input;
    std::string out;
    std::string market;
    std::string gap_policy;
    std::string window;
    bool no_peak = false;
    bool no_csv = false;
    bool dump_config = false;
    std::vector<std::string> overrides;
};

struct SynthArgs {
    std::string kind;
    std::size_t length = 1024;
    std::uint64_t seed = 1;
    std::vector<std::string> params;
    std::string out = "-";
    std::string start;
    std::string market = "synthetic";
};

struct ReportArgs {
    std::vector<std::string> files;
    std::string csv_path;
    std::string format = "text";
};

int run_analyze(const AnalyzeArgs& a) {
    ps::AnalysisConfig config;
    if (!a.config_path.empty()) config = ps::load_config(a.config_path);
    if (!a.input.empty()) config.input.path = a.input;
    if (!a.out.empty()) config.output.dir = a.out;
    if (!a.market.empty()) config.input.market_id = a.market;
    if (!a.gap_policy.empty()) config.input.gap_policy = ps::parse_gap_policy(a.gap_policy);
    if (!a.window.empty()) config.spectral.window = ps::spectral::parse_window(a.window);
    if (a.no_peak) config.peak.enabled = false;
    if (a.no_csv) config.output.csv = false;
    for (const auto& o : a.overrides) ps::apply_override(config, o);

    if (a.dump_config) {
        std::cout << ps::format_config(config);
        return 0;
    }
    const auto report = ps::cmd_analyze(config);
    for (const auto& s : report.series) {
        std::cout << s.label << ": alpha_mean " << s.dfa.alpha_mean << " +/- "
                  << s.dfa.alpha_mean_err;
        if (s.beta) std::cout << ", beta " << s.beta->beta << ", alpha_theor " << s.beta->alpha_theor;
        std::cout << '\n';
    }
    std::cout << "wrote " << (config.output.dir / "report.json").string() << '\n';
    return 0;
}

int run_synth(const SynthArgs& a) {
    std::map<std::string, std::string> values;
    for (const auto& p : a.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ps::Error(ps::Errc::InvalidSpec, "synth", "parameter '" + p + "' is not key=value");
        }
        values[p.substr(0, eq)] = p.substr(eq + 1);
    }
    ps::synth::GeneratorSpec spec;
    spec.params = ps::synth::make_params(a.kind, values);
    spec.length = a.length;
    spec.seed = a.seed;
    spec.market_id = a.market;
    if (!a.start.empty()) spec.start_time = ps::parse_timestamp(a.start);

    const auto series = ps::synth::gen(spec);
    if (a.out == "-") {
        ps::write_csv(std::cout, series);
        return 0;
    }
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw ps::Error(ps::Errc::UnreadableFile, "synth", "cannot write " + a.out);
    ps::write_csv(out, series);
    return 0;
}

int run_report(const ReportArgs& a) {
    std::vector<std::filesystem::path> paths(a.files.begin(), a.files.end());
    const auto table = ps::build_comparison(paths);
    if (!a.csv_path.empty()) {
        std::ofstream out(a.csv_path, std::ios::binary);
        if (!out) throw ps::Error(ps::Errc::UnreadableFile, "report", "cannot write " + a.csv_path);
        ps::write_table_csv(out, table);
    }
    if (a.format == "csv") {
        ps::write_table_csv(std::cout, table);
    } else {
        ps::write_table_text(std::cout, table);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scaling analysis of hourly price series"};
    app.set_version_flag("--version", std::string(PRICESCALE_VERSION));
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "Run the full analysis and write a report");
    cmd_analyze->add_option("-c,--config", analyze.config_path, "Config file")->check(CLI::ExistingFile);
    cmd_analyze->add_option("-i,--input", analyze.input, "Input CSV (overrides input.path)");
    cmd_analyze->add_option("-o,--out", analyze.out, "Output directory (overrides output.dir)");
    cmd_analyze->add_option("--market", analyze.market, "Market label (overrides input.market_id)");
    cmd_analyze->add_option("--gap-policy", analyze.gap_policy,
                            "linear-interpolate, carry-forward or fail");
    cmd_analyze->add_option("--window", analyze.window, "Spectral taper: rectangular or hann");
    cmd_analyze->add_flag("--no-peak", analyze.no_peak, "Skip the on-peak/off-peak split");
    cmd_analyze->add_flag("--no-csv", analyze.no_csv, "Write report.json only");
    cmd_analyze->add_option("-s,--set", analyze.overrides, "Override section.key=value (repeatable)");
    cmd_analyze->add_flag("--dump-config", analyze.dump_config,
                          "Print the effective config with documented defaults and exit");

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic hourly series as CSV");
    cmd_synth->add_option("-k,--kind", synth.kind,
                          "white-noise, random-walk, fbm, ou, mrjd, spike-train, sinusoid-mix")
        ->required();
    cmd_synth->add_option("-n,--length", synth.length, "Number of hourly samples")->capture_default_str();
    cmd_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    cmd_synth->add_option("-p,--param", synth.params, "Generator parameter key=value (repeatable)");
    cmd_synth->add_option("-o,--out", synth.out, "Output CSV, - for stdout")->capture_default_str();
    cmd_synth->add_option("--start", synth.start, "First timestamp (ISO-8601)");
    cmd_synth->add_option("--market", synth.market, "Market label")->capture_default_str();

    ReportArgs report;
    auto* cmd_report = app.add_subcommand("report", "Compare reports side by side");
    cmd_report->add_option("reports", report.files, "report.json files or run directories")
        ->required();
    cmd_report->add_option("--csv", report.csv_path, "Also write the table as CSV");
    cmd_report->add_option("--format", report.format, "Stdout format: text or csv")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ps::ErrorKind::Usage);
    }

    try {
        if (*cmd_analyze) return run_analyze(analyze);
        if (*cmd_synth) return run_synth(synth);
        if (*cmd_report) return run_report(report);
    } catch (const ps::Error& e) {
        std::cerr << "error: " << e.describe() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ps::ErrorKind::Data);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ps::ErrorKind::Numerical);
    }
    return static_cast<int>(ps::ErrorKind::Usage);
}
