#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pricescale {

/// Side-by-side comparison of several reports: one column per report, one row
/// per (series, metric). Cells hold "-" where a report has no value.
struct ComparisonTable {
    std::vector<std::string> columns;
    std::vector<std::string> row_labels;
    std::vector<std::vector<std::string>> cells;  // [row][column]
};

/// Each entry is (source name, parsed report). Every report must carry the
/// supported schema version; the error lists all offending sources.
ComparisonTable build_comparison(const std::vector<std::pair<std::string, nlohmann::json>>& reports);

/// Reads and parses report.json files (or run directories holding one).
ComparisonTable build_comparison(const std::vector<std::filesystem::path>& paths);

void write_table_csv(std::ostream& out, const ComparisonTable& table);
void write_table_text(std::ostream& out, const ComparisonTable& table);

}  // namespace pricescale
