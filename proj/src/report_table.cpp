#include "pricescale/report_table.hpp"

#include "pricescale/error.hpp"
#include "pricescale/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

namespace pricescale {

namespace {

using nlohmann::json;

constexpr const char* kModule = "report";

std::string fmt(const json& v) {
    if (v.is_number()) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.3f", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return "-";
}

const json* find(const json& obj, std::initializer_list<const char*> path) {
    const json* cur = &obj;
    for (const char* key : path) {
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &cur->at(key);
        if (cur->is_null()) return nullptr;
    }
    return cur;
}

std::string period_name(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

int series_rank(const std::string& label) {
    if (label == "all") return 0;
    if (label == "on_peak") return 1;
    if (label == "off_peak") return 2;
    return 3;
}

// Ordered metrics for one series block, as (row suffix, cell text).
std::vector<std::pair<std::string, std::string>> metrics(const json& s) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto put = [&](std::string name, const json* v) {
        out.emplace_back(std::move(name), v ? fmt(*v) : "-");
    };
    for (const char* k : {"alpha_mean", "alpha_mean_err", "alpha_max", "alpha_max_err"}) {
        put(k, find(s, {"dfa", k}));
    }
    for (const char* k : {"beta", "beta_err", "alpha_theor", "alpha_theor_err", "alpha_theor_spread"}) {
        put(k, find(s, {"spectral", k}));
    }
    if (const json* cycles = find(s, {"cycles"})) {
        for (const auto& c : *cycles) {
            put("cycle_" + period_name(c.value("period_hours", 0.0)) + "h_significance",
                c.contains("significance") ? &c.at("significance") : nullptr);
        }
    }
    if (const json* ranges = find(s, {"pareto", "ranges"}); ranges && ranges->is_array()) {
        const char* names[] = {"lower", "upper"};
        for (std::size_t k = 0; k < std::min<std::size_t>(2, ranges->size()); ++k) {
            const auto& r = (*ranges)[k];
            const std::string base = std::string("gamma_") + names[k];
            out.emplace_back(base + "_range",
                             "[" + period_name(r.value("lo", 0.0)) + ", " +
                                 period_name(r.value("hi", 0.0)) + "]");
            put(base, find(r, {"estimate", "gamma"}));
            put(base + "_err", find(r, {"estimate", "gamma_err"}));
            put(base + "_class", find(r, {"estimate", "moment_class"}));
        }
    }
    if (const json* incs = find(s, {"increments"})) {
        for (const auto& inc : *incs) {
            const std::string n = "_n" + std::to_string(inc.value("scale_n", 0));
            put("q4_slope" + n, find(inc, {"binned", "q4_slope", "slope"}));
            put("q1_slope" + n, find(inc, {"binned", "q1_slope", "slope"}));
            put("dominant_scenario" + n, find(inc, {"scenarios", "dominant"}));
        }
    }
    return out;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

ComparisonTable build_comparison(const std::vector<std::pair<std::string, json>>& reports) {
    if (reports.empty()) {
        throw Error(Errc::InvalidArgument, kModule, "at least one report is required");
    }
    std::vector<std::string> offending;
    for (const auto& [source, doc] : reports) {
        const json* v = find(doc, {"schema_version"});
        if (!v || !v->is_number_integer() || v->get<int>() != kReportSchemaVersion) {
            offending.push_back(source + " (schema_version " + (v ? v->dump() : "missing") + ")");
        }
    }
    if (!offending.empty()) {
        std::string msg = "expected schema_version " + std::to_string(kReportSchemaVersion) + "; offending:";
        for (const auto& o : offending) msg += " " + o;
        throw Error(Errc::SchemaMismatch, kModule, msg);
    }
    for (const auto& [source, doc] : reports) {
        try {
            validate_report(doc);
        } catch (const Error& e) {
            throw Error(Errc::SchemaMismatch, kModule, source + ": " + e.what());
        }
    }

    // Row order: series rank, then first appearance of each metric.
    std::vector<std::pair<int, std::string>> order;
    std::vector<std::map<std::string, std::string>> columns(reports.size());
    ComparisonTable table;
    for (std::size_t c = 0; c < reports.size(); ++c) {
        const auto& doc = reports[c].second;
        std::string name = doc.value("market_id", reports[c].first);
        if (std::find(table.columns.begin(), table.columns.end(), name) != table.columns.end()) {
            name += " (" + reports[c].first + ")";
        }
        table.columns.push_back(name);
        for (const auto& s : doc.at("series")) {
            const std::string label = s.value("label", "?");
            for (auto& [metric, text] : metrics(s)) {
                const std::string row = label + "." + metric;
                if (std::none_of(order.begin(), order.end(),
                                 [&](const auto& o) { return o.second == row; })) {
                    order.emplace_back(series_rank(label), row);
                }
                columns[c][row] = text;
            }
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [rank, row] : order) {
        table.row_labels.push_back(row);
        std::vector<std::string> cells;
        for (const auto& col : columns) {
            auto it = col.find(row);
            cells.push_back(it == col.end() ? "-" : it->second);
        }
        table.cells.push_back(std::move(cells));
    }
    return table;
}

ComparisonTable build_comparison(const std::vector<std::filesystem::path>& paths) {
    std::vector<std::pair<std::string, json>> reports;
    for (auto path : paths) {
        if (std::filesystem::is_directory(path)) path /= "report.json";
        std::ifstream in(path);
        if (!in) throw Error(Errc::UnreadableFile, kModule, "cannot open " + path.string());
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded()) {
            throw Error(Errc::ParseError, kModule, path.string() + " is not valid JSON");
        }
        reports.emplace_back(path.string(), std::move(doc));
    }
    return build_comparison(reports);
}

void write_table_csv(std::ostream& out, const ComparisonTable& table) {
    out << "metric";
    for (const auto& c : table.columns) out << ',' << csv_cell(c);
    out << '\n';
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out << csv_cell(table.row_labels[r]);
        for (const auto& cell : table.cells[r]) out << ',' << csv_cell(cell);
        out << '\n';
    }
}

void write_table_text(std::ostream& out, const ComparisonTable& table) {
    std::size_t label_width = 6;
    for (const auto& l : table.row_labels) label_width = std::max(label_width, l.size());
    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::size_t w = table.columns[c].size();
        for (const auto& row : table.cells) w = std::max(w, row[c].size());
        widths.push_back(w);
    }
    const auto pad = [&](const std::string& s, std::size_t w, bool right) {
        const std::string fill(w > s.size() ? w - s.size() : 0, ' ');
        out << (right ? fill + s : s + fill);
    };
    pad("metric", label_width, false);
    for (std::size_t c = 0; c < widths.size(); ++c) {
        out << "  ";
        pad(table.columns[c], widths[c], true);
    }
    out << '\n';
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        pad(table.row_labels[r], label_width, false);
        for (std::size_t c = 0; c < widths.size(); ++c) {
            out << "  ";
            pad(table.cells[r][c], widths[c], true);
        }
        out << '\n';
    }
}

}  // namespace pricescale
