#include "pdop/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "pdop/errors.hpp"
#include "pdop/version.hpp"

namespace pdop {

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_cell(const Row& value) {
    if (value.is_null()) return "";
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number_float()) return format_double(value.get<double>());
    if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
    if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
    if (value.is_string()) return csv_escape(value.get<std::string>());
    return csv_escape(value.dump());
}

void put_cov(Row& row, const char* prefix, const Eigen::Matrix3d& cov) {
    static constexpr const char* axes = "xyz";
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            row[std::string(prefix) + "_" + axes[i] + axes[j] + "_m2"] = cov(i, j);
        }
    }
}

Row provenance_row(const Provenance& p) {
    Row row = Row::object();
    row["tool_version"] = kToolVersion;
    row["scenario_schema_version"] = kScenarioSchemaVersion;
    row["command"] = p.command;
    row["scenario"] = p.scenario_path;
    row["overrides"] = p.overrides;
    if (p.seed) row["seed"] = *p.seed;
    if (p.n_samples) row["n_samples"] = *p.n_samples;
    return row;
}

}  // namespace

std::vector<std::string> Table::columns() const {
    std::vector<std::string> cols;
    for (const Row& row : rows) {
        for (const auto& [key, value] : row.items()) {
            if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
        }
    }
    return cols;
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

Row dop_report_row(const DopReport& report) {
    Row row = Row::object();
    row["pdop"] = report.pdop;
    row["rms_m"] = report.rms_m;
    row["sigma_x_m"] = report.sigma_x_m;
    row["sigma_y_m"] = report.sigma_y_m;
    row["sigma_z_m"] = report.sigma_z_m;
    row["kappa_m2"] = report.kappa_m2;
    return row;
}

Row mismatch_report_row(const MismatchReport& report) {
    Row row = Row::object();
    row["optimism_ratio"] = report.optimism_ratio;
    row["expected_sq_error_m2"] = report.expected_sq_error_m2;
    row["pdop_predicted_sq_error_m2"] = report.pdop_predicted_sq_error_m2;
    row["bias_sq_m2"] = report.bias_sq_m2;
    put_cov(row, "cov", report.cov_r_hat);
    return row;
}

Row mc_report_row(const McReport& report) {
    Row row = Row::object();
    row["n_samples"] = report.n_samples;
    row["seed"] = report.seed;
    row["empirical_mean_sq_error_m2"] = report.empirical_mean_sq_error_m2;
    row["analytic_sq_error_m2"] = report.analytic_sq_error_m2;
    row["standard_error_m2"] = report.standard_error_m2;
    row["z_score"] = report.z_score;
    row["mean_e_x_m"] = report.empirical_mean_e.x();
    row["mean_e_y_m"] = report.empirical_mean_e.y();
    row["mean_e_z_m"] = report.empirical_mean_e.z();
    put_cov(row, "emp_cov", report.empirical_cov);
    row["cov_frobenius_error_m2"] = report.cov_frobenius_error;
    return row;
}

std::string to_csv(const Table& table) {
    const std::vector<std::string> cols = table.columns();
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(cols[c]);
    }
    out += '\n';
    for (const Row& row : table.rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out += ',';
            const auto it = row.find(cols[c]);
            if (it != row.end()) out += render_cell(*it);
        }
        out += '\n';
    }
    return out;
}

std::string to_structured(const Table& table, const Provenance& provenance) {
    Row doc = Row::object();
    doc["provenance"] = provenance_row(provenance);
    doc["rows"] = table.rows;
    return doc.dump(2) + "\n";
}

std::string provenance_sidecar(const Provenance& provenance) {
    return provenance_row(provenance).dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + path.string() + "'");
    out << content;
    if (!out) throw ValidationError("failed writing output file '" + path.string() + "'");
}

}  // namespace pdop
