#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdop/dop_analysis.hpp"
#include "pdop/montecarlo.hpp"

namespace pdop {

/// One flat report row; insertion order is the column order.
using Row = nlohmann::ordered_json;

struct Table {
    std::vector<Row> rows;

    /// Union of row keys in first-appearance order.
    std::vector<std::string> columns() const;
};

/// Run metadata written next to every report. Deliberately excludes
/// wall-clock time and worker count: equal inputs must give equal bytes.
struct Provenance {
    std::string command;
    std::string scenario_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n_samples;
};

/// Shortest text that reproduces the exact double ("%.17g").
std::string format_double(double value);

Row dop_report_row(const DopReport& report);
Row mismatch_report_row(const MismatchReport& report);
Row mc_report_row(const McReport& report);

std::string to_csv(const Table& table);
std::string to_structured(const Table& table, const Provenance& provenance);
std::string provenance_sidecar(const Provenance& provenance);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pdop
