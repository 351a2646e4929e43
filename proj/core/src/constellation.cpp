#include "pdop/constellation.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "pdop/errors.hpp"
#include "pdop/version.hpp"

namespace pdop {

namespace {

using nlohmann::json;

bool finite(double v) { return std::isfinite(v); }

void check_azel_entry(const AzElEntry& e) {
    if (e.id.empty()) throw ValidationError("satellite id must not be empty");
    if (!finite(e.azimuth_deg) || e.azimuth_deg < 0.0 || e.azimuth_deg >= 360.0) {
        throw ValidationError("azimuth of '" + e.id + "' must lie in [0, 360), got " +
                              std::to_string(e.azimuth_deg));
    }
    if (!finite(e.elevation_deg) || e.elevation_deg < -90.0 || e.elevation_deg > 90.0) {
        throw ValidationError("elevation of '" + e.id + "' must lie in [-90, 90], got " +
                              std::to_string(e.elevation_deg));
    }
    if (!finite(e.range_m) || e.range_m <= 0.0) {
        throw ValidationError("range of '" + e.id + "' must be positive, got " +
                              std::to_string(e.range_m));
    }
}

void check_unique_ids(const std::vector<SatelliteEntry>& satellites) {
    for (std::size_t i = 0; i < satellites.size(); ++i) {
        for (std::size_t j = i + 1; j < satellites.size(); ++j) {
            if (satellites[i].id == satellites[j].id) {
                throw ValidationError("duplicate satellite id '" + satellites[i].id + "'");
            }
        }
    }
}

std::string padded_index(int value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return digits;
}

// --- strict JSON access -------------------------------------------------

std::string describe(const json& v) {
    switch (v.type()) {
        case json::value_t::null: return "null";
        case json::value_t::boolean: return "a boolean";
        case json::value_t::string: return "a string";
        case json::value_t::array: return "an array";
        case json::value_t::object: return "an object";
        default: return "a number";
    }
}

const json& expect_object(const json& v, const std::string& ctx) {
    if (!v.is_object()) throw ValidationError(ctx + " must be an object, got " + describe(v));
    return v;
}

const json& expect_array(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw ValidationError(ctx + " must be an array, got " + describe(v));
    return v;
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            std::string list;
            for (const char* a : allowed) {
                if (!list.empty()) list += ", ";
                list += a;
            }
            throw ValidationError("unknown key '" + key + "' in " + ctx +
                                  " (allowed: " + list + ")");
        }
    }
}

const json& require_key(const json& obj, const std::string& ctx, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(ctx + " is missing required key '" + key + "'");
    return *it;
}

double as_double(const json& v, const std::string& ctx) {
    if (!v.is_number()) throw ValidationError(ctx + " must be a number, got " + describe(v));
    const double d = v.get<double>();
    if (!finite(d)) throw ValidationError(ctx + " must be finite");
    return d;
}

std::uint64_t as_uint(const json& v, const std::string& ctx) {
    if (!v.is_number_unsigned()) {
        throw ValidationError(ctx + " must be a non-negative integer, got " +
                              (v.is_number() ? v.dump() : describe(v)));
    }
    return v.get<std::uint64_t>();
}

int as_count(const json& v, const std::string& ctx) {
    const std::uint64_t u = as_uint(v, ctx);
    if (u > 1'000'000) throw ValidationError(ctx + " is implausibly large: " + v.dump());
    return static_cast<int>(u);
}

std::string as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) throw ValidationError(ctx + " must be a string, got " + describe(v));
    return v.get<std::string>();
}

Eigen::VectorXd as_vector(const json& v, const std::string& ctx) {
    expect_array(v, ctx);
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = as_double(v[i], ctx + "[" + std::to_string(i) + "]");
    }
    return out;
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& ctx) {
    expect_array(v, ctx);
    if (v.empty()) throw ValidationError(ctx + " must not be empty");
    const std::size_t cols = expect_array(v[0], ctx + "[0]").size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string row_ctx = ctx + "[" + std::to_string(i) + "]";
        const json& row = expect_array(v[i], row_ctx);
        if (row.size() != cols) {
            throw ValidationError(row_ctx + " has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(cols));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                as_double(row[j], row_ctx + "[" + std::to_string(j) + "]");
        }
    }
    return out;
}

// --- covariance model specs ----------------------------------------------

Eigen::MatrixXd known_matrix_from(const json& obj, const std::string& ctx,
                                  const std::filesystem::path& base_dir, const char* key) {
    if (key == std::string("csv_path")) {
        const std::filesystem::path p(as_string(obj.at("csv_path"), ctx + ".csv_path"));
        return load_matrix_csv(p.is_absolute() ? p : base_dir / p);
    }
    return as_matrix(obj.at(key), ctx + "." + key);
}

ScintillationSpec scintillation_from(const json& v, const std::string& ctx) {
    expect_object(v, ctx);
    check_keys(v, ctx, {"entries", "c1_m2", "c2_m2"});
    ScintillationSpec spec;
    const json& entries = expect_array(require_key(v, ctx, "entries"), ctx + ".entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string ectx = ctx + ".entries[" + std::to_string(i) + "]";
        const json& e = expect_object(entries[i], ectx);
        check_keys(e, ectx, {"s4", "sigma_phi_rad"});
        spec.entries.push_back({as_double(require_key(e, ectx, "s4"), ectx + ".s4"),
                                as_double(require_key(e, ectx, "sigma_phi_rad"),
                                          ectx + ".sigma_phi_rad")});
    }
    if (v.contains("c1_m2")) spec.c1_m2 = as_double(v["c1_m2"], ctx + ".c1_m2");
    if (v.contains("c2_m2")) spec.c2_m2 = as_double(v["c2_m2"], ctx + ".c2_m2");
    return spec;
}

CovarianceSpec covariance_spec_from(const json& v, const std::string& ctx,
                                    const std::filesystem::path& base_dir) {
    expect_object(v, ctx);
    const std::string type = as_string(require_key(v, ctx, "type"), ctx + ".type");

    if (type == "scaled_identity") {
        check_keys(v, ctx, {"type", "gamma_m2"});
        return CovarianceSpec::make_scaled_identity(
            as_double(require_key(v, ctx, "gamma_m2"), ctx + ".gamma_m2"));
    }

    if (type == "composite") {
        check_keys(v, ctx, {"type", "gamma_m2", "known"});
        const double gamma = as_double(require_key(v, ctx, "gamma_m2"), ctx + ".gamma_m2");
        const std::string kctx = ctx + ".known";
        const json& known = expect_object(require_key(v, ctx, "known"), kctx);
        check_keys(known, kctx, {"diagonal_m2", "matrix_m2", "csv_path", "scintillation"});
        if (known.size() != 1) {
            throw ValidationError(kctx +
                                  " must contain exactly one of diagonal_m2, matrix_m2, "
                                  "csv_path, scintillation");
        }
        if (known.contains("diagonal_m2")) {
            return CovarianceSpec::make_composite_diagonal(
                gamma, as_vector(known["diagonal_m2"], kctx + ".diagonal_m2"));
        }
        if (known.contains("scintillation")) {
            return CovarianceSpec::make_composite_scintillation(
                gamma, scintillation_from(known["scintillation"], kctx + ".scintillation"));
        }
        const char* key = known.contains("csv_path") ? "csv_path" : "matrix_m2";
        return CovarianceSpec::make_composite_matrix(gamma,
                                                     known_matrix_from(known, kctx, base_dir, key));
    }

    if (type == "full") {
        check_keys(v, ctx, {"type", "matrix_m2", "csv_path"});
        const bool has_matrix = v.contains("matrix_m2");
        const bool has_csv = v.contains("csv_path");
        if (has_matrix == has_csv) {
            throw ValidationError(ctx + " of type 'full' needs exactly one of matrix_m2, csv_path");
        }
        return CovarianceSpec::make_full_matrix(
            known_matrix_from(v, ctx, base_dir, has_csv ? "csv_path" : "matrix_m2"));
    }

    throw ValidationError(ctx + ".type must be one of scaled_identity, composite, full; got '" +
                          type + "'");
}

// --- satellite blocks -----------------------------------------------------

std::vector<SatelliteEntry> satellites_from(const json& v, const GeodeticPosition& receiver) {
    const std::string ctx = "satellites";
    expect_object(v, ctx);
    check_keys(v, ctx, {"azel", "ecef", "walker"});
    if (v.size() != 1) {
        throw ValidationError(ctx + " must contain exactly one of azel, ecef, walker");
    }

    if (v.contains("azel")) {
        const json& arr = expect_array(v["azel"], ctx + ".azel");
        if (arr.empty()) throw ValidationError(ctx + ".azel must not be empty");
        std::vector<AzElEntry> entries;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ectx = ctx + ".azel[" + std::to_string(i) + "]";
            const json& e = expect_object(arr[i], ectx);
            check_keys(e, ectx, {"id", "az_deg", "el_deg", "range_m"});
            AzElEntry entry;
            entry.id = as_string(require_key(e, ectx, "id"), ectx + ".id");
            entry.azimuth_deg = as_double(require_key(e, ectx, "az_deg"), ectx + ".az_deg");
            entry.elevation_deg = as_double(require_key(e, ectx, "el_deg"), ectx + ".el_deg");
            if (e.contains("range_m")) entry.range_m = as_double(e["range_m"], ectx + ".range_m");
            entries.push_back(std::move(entry));
        }
        return from_azel(receiver, entries);
    }

    if (v.contains("ecef")) {
        const json& arr = expect_array(v["ecef"], ctx + ".ecef");
        if (arr.empty()) throw ValidationError(ctx + ".ecef must not be empty");
        std::vector<SatelliteEntry> out;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ectx = ctx + ".ecef[" + std::to_string(i) + "]";
            const json& e = expect_object(arr[i], ectx);
            check_keys(e, ectx, {"id", "x_m", "y_m", "z_m"});
            SatelliteEntry entry;
            entry.id = as_string(require_key(e, ectx, "id"), ectx + ".id");
            if (entry.id.empty()) throw ValidationError(ectx + ".id must not be empty");
            entry.position = {as_double(require_key(e, ectx, "x_m"), ectx + ".x_m"),
                              as_double(require_key(e, ectx, "y_m"), ectx + ".y_m"),
                              as_double(require_key(e, ectx, "z_m"), ectx + ".z_m")};
            out.push_back(std::move(entry));
        }
        return out;
    }

    const std::string wctx = ctx + ".walker";
    const json& w = expect_object(v["walker"], wctx);
    check_keys(w, wctx,
               {"total", "planes", "phasing", "inclination_deg", "altitude_m", "epoch_deg"});
    WalkerSpec spec;
    spec.total = as_count(require_key(w, wctx, "total"), wctx + ".total");
    spec.planes = as_count(require_key(w, wctx, "planes"), wctx + ".planes");
    spec.phasing = as_count(require_key(w, wctx, "phasing"), wctx + ".phasing");
    spec.inclination_deg =
        as_double(require_key(w, wctx, "inclination_deg"), wctx + ".inclination_deg");
    spec.altitude_m = as_double(require_key(w, wctx, "altitude_m"), wctx + ".altitude_m");
    if (w.contains("epoch_deg")) spec.epoch_deg = as_double(w["epoch_deg"], wctx + ".epoch_deg");
    return walker_constellation(spec);
}

// --- overrides -------------------------------------------------------------

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> segments;
    std::string current;
    for (char c : path) {
        if (c == '.') {
            segments.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    segments.push_back(current);
    for (const std::string& s : segments) {
        if (s.empty()) throw ValidationError("override path '" + path + "' has an empty segment");
    }
    return segments;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("override must look like path.to.key=value, got '" + assignment +
                              "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* cur = &doc;
    const std::vector<std::string> segments = split_path(path);
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const std::string& seg = segments[i];
        const bool last = i + 1 == segments.size();
        if (cur->is_array()) {
            if (!all_digits(seg)) {
                throw ValidationError("override '" + path + "': '" + seg +
                                      "' is not an array index");
            }
            const std::size_t index = std::stoull(seg);
            if (index >= cur->size()) {
                throw ValidationError("override '" + path + "': index " + seg +
                                      " is out of range (size " + std::to_string(cur->size()) +
                                      ")");
            }
            cur = &(*cur)[index];
        } else if (cur->is_object() || cur->is_null()) {
            cur = &(*cur)[seg];
        } else {
            throw ValidationError("override '" + path + "': '" + segments[i - 1] +
                                  "' is not an object or array");
        }
        if (last) *cur = value;
    }
}

// --- whole-document parse ----------------------------------------------

GeodeticPosition receiver_from(const json& v) {
    const std::string ctx = "receiver";
    expect_object(v, ctx);
    check_keys(v, ctx, {"lat_deg", "lon_deg", "height_m"});
    GeodeticPosition p{as_double(require_key(v, ctx, "lat_deg"), ctx + ".lat_deg"),
                       as_double(require_key(v, ctx, "lon_deg"), ctx + ".lon_deg"),
                       as_double(require_key(v, ctx, "height_m"), ctx + ".height_m")};
    geodetic_to_ecef(p);  // range checks
    return p;
}

McSettings mc_from(const json& v) {
    const std::string ctx = "mc";
    expect_object(v, ctx);
    check_keys(v, ctx, {"n_samples", "seed", "delta_r_true_m", "analytic_override_m2"});
    McSettings mc;
    mc.n_samples = as_uint(require_key(v, ctx, "n_samples"), ctx + ".n_samples");
    if (mc.n_samples < 2) {
        throw ValidationError(ctx + ".n_samples must be at least 2, got " +
                              std::to_string(mc.n_samples));
    }
    if (v.contains("seed")) mc.seed = as_uint(v["seed"], ctx + ".seed");
    if (v.contains("delta_r_true_m")) {
        const Eigen::VectorXd d = as_vector(v["delta_r_true_m"], ctx + ".delta_r_true_m");
        if (d.size() != 3) {
            throw ValidationError(ctx + ".delta_r_true_m must have exactly 3 entries, got " +
                                  std::to_string(d.size()));
        }
        mc.delta_r_true = d;
    }
    if (v.contains("analytic_override_m2")) {
        mc.analytic_override_m2 = as_double(v["analytic_override_m2"],
                                            ctx + ".analytic_override_m2");
    }
    return mc;
}

void check_model_size(const CovarianceSpec& spec, const std::string& ctx,
                      std::size_t n_satellites) {
    const std::optional<int> fixed = spec.fixed_size();
    if (fixed && static_cast<std::size_t>(*fixed) != n_satellites) {
        throw ValidationError(ctx + " is sized for " + std::to_string(*fixed) +
                              " satellites but the scenario lists " +
                              std::to_string(n_satellites));
    }
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    const std::string ctx = "scenario";
    expect_object(doc, ctx);
    check_keys(doc, ctx,
               {"schema_version", "receiver", "satellites", "mask_elevation_deg", "error_model",
                "true_error_model", "mc", "bias_m"});

    if (doc.contains("schema_version")) {
        const std::uint64_t version = as_uint(doc["schema_version"], "schema_version");
        if (version != static_cast<std::uint64_t>(kScenarioSchemaVersion)) {
            throw ValidationError("unsupported schema_version " + std::to_string(version) +
                                  "; this build reads version " +
                                  std::to_string(kScenarioSchemaVersion));
        }
    }

    Scenario scenario;
    scenario.receiver = receiver_from(require_key(doc, ctx, "receiver"));
    scenario.satellites = satellites_from(require_key(doc, ctx, "satellites"), scenario.receiver);
    check_unique_ids(scenario.satellites);

    if (doc.contains("mask_elevation_deg")) {
        const double mask = as_double(doc["mask_elevation_deg"], "mask_elevation_deg");
        if (mask < -90.0 || mask > 90.0) {
            throw ValidationError("mask_elevation_deg must lie in [-90, 90], got " +
                                  std::to_string(mask));
        }
        scenario.mask_elevation_deg = mask;
    }

    scenario.error_model =
        covariance_spec_from(require_key(doc, ctx, "error_model"), "error_model", base_dir);
    check_model_size(scenario.error_model, "error_model", scenario.satellites.size());

    if (doc.contains("true_error_model")) {
        scenario.true_error_model =
            covariance_spec_from(doc["true_error_model"], "true_error_model", base_dir);
        check_model_size(*scenario.true_error_model, "true_error_model",
                         scenario.satellites.size());
    }

    if (doc.contains("mc")) scenario.mc = mc_from(doc["mc"]);

    if (doc.contains("bias_m")) {
        const Eigen::VectorXd bias = as_vector(doc["bias_m"], "bias_m");
        if (static_cast<std::size_t>(bias.size()) != scenario.satellites.size()) {
            throw ValidationError("bias_m has " + std::to_string(bias.size()) +
                                  " entries but the scenario lists " +
                                  std::to_string(scenario.satellites.size()) + " satellites");
        }
        scenario.bias_m = bias;
    }

    return scenario;
}

}  // namespace

std::vector<SatelliteEntry> from_azel(const GeodeticPosition& receiver,
                                      const std::vector<AzElEntry>& entries) {
    const EcefPosition origin = geodetic_to_ecef(receiver);
    const Eigen::Matrix3d enu = enu_rotation(receiver);
    std::vector<SatelliteEntry> out;
    out.reserve(entries.size());
    for (const AzElEntry& e : entries) {
        check_azel_entry(e);
        const double az = deg2rad(e.azimuth_deg);
        const double el = deg2rad(e.elevation_deg);
        const Eigen::Vector3d dir_enu{std::cos(el) * std::sin(az), std::cos(el) * std::cos(az),
                                      std::sin(el)};
        const Eigen::Vector3d position = origin.vec() + e.range_m * (enu.transpose() * dir_enu);
        out.push_back({e.id, EcefPosition::from(position)});
    }
    return out;
}

std::vector<SatelliteEntry> walker_constellation(const WalkerSpec& spec) {
    if (spec.total < 1) throw ValidationError("walker total must be at least 1");
    if (spec.planes < 1) throw ValidationError("walker planes must be at least 1");
    if (spec.total % spec.planes != 0) {
        throw ValidationError("walker total (" + std::to_string(spec.total) +
                              ") must be divisible by planes (" + std::to_string(spec.planes) +
                              ")");
    }
    if (spec.phasing < 0 || spec.phasing >= spec.planes) {
        throw ValidationError("walker phasing must lie in [0, planes), got " +
                              std::to_string(spec.phasing));
    }
    if (!finite(spec.altitude_m) || spec.altitude_m <= 0.0) {
        throw ValidationError("walker altitude_m must be positive");
    }
    if (!finite(spec.inclination_deg) || !finite(spec.epoch_deg)) {
        throw ValidationError("walker angles must be finite");
    }

    const int per_plane = spec.total / spec.planes;
    const double radius = wgs84::kSemiMajorAxis + spec.altitude_m;
    const double incl = deg2rad(spec.inclination_deg);
    const std::size_t width = std::max<std::size_t>(2, std::to_string(spec.total).size());

    std::vector<SatelliteEntry> out;
    out.reserve(static_cast<std::size_t>(spec.total));
    for (int p = 0; p < spec.planes; ++p) {
        const double raan = 2.0 * std::numbers::pi * p / spec.planes;
        for (int j = 0; j < per_plane; ++j) {
            const double u = 2.0 * std::numbers::pi *
                                 (static_cast<double>(j) / per_plane +
                                  static_cast<double>(spec.phasing) * p / spec.total) +
                             deg2rad(spec.epoch_deg);
            const Eigen::Vector3d position{
                radius * (std::cos(raan) * std::cos(u) -
                          std::sin(raan) * std::sin(u) * std::cos(incl)),
                radius * (std::sin(raan) * std::cos(u) +
                          std::cos(raan) * std::sin(u) * std::cos(incl)),
                radius * std::sin(u) * std::sin(incl)};
            const int ordinal = p * per_plane + j + 1;
            out.push_back({"W" + padded_index(ordinal, width), EcefPosition::from(position)});
        }
    }
    return out;
}

AssembledScenario assemble(const Scenario& scenario) {
    const EcefPosition receiver_ecef = geodetic_to_ecef(scenario.receiver);

    std::vector<std::pair<std::string, EcefPosition>> satellites;
    satellites.reserve(scenario.satellites.size());
    for (const SatelliteEntry& s : scenario.satellites) satellites.emplace_back(s.id, s.position);

    auto [design, kept] =
        build_design_matrix_indexed(receiver_ecef, satellites, scenario.mask_elevation_deg);

    const CovarianceModel assumed = scenario.error_model.subset(kept).build(design.size());
    std::optional<CovarianceModel> truth;
    if (scenario.true_error_model) {
        truth = scenario.true_error_model->subset(kept).build(design.size());
    }

    std::optional<Eigen::VectorXd> bias;
    if (scenario.bias_m) {
        Eigen::VectorXd b(static_cast<Eigen::Index>(kept.size()));
        for (std::size_t i = 0; i < kept.size(); ++i) {
            b[static_cast<Eigen::Index>(i)] = (*scenario.bias_m)[kept[i]];
        }
        bias = std::move(b);
    }

    return {std::move(design), assumed, std::move(truth), std::move(bias), receiver_ecef,
            std::move(kept)};
}

Scenario load_scenario(const std::filesystem::path& file,
                       const std::vector<std::string>& overrides) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file '" + file.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario_text(buffer.str(), file.parent_path(), overrides);
}

Scenario load_scenario_text(const std::string& text, const std::filesystem::path& base_dir,
                            const std::vector<std::string>& overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    for (const std::string& assignment : overrides) apply_override(doc, assignment);
    return parse_scenario(doc, base_dir);
}

Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open CSV file '" + file.string() + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::vector<double> row;
        std::size_t start = 0;
        int field_no = 1;
        while (true) {
            const std::size_t comma = line.find(',', start);
            std::string field = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            const std::size_t b = field.find_first_not_of(" \t");
            const std::size_t e = field.find_last_not_of(" \t");
            field = b == std::string::npos ? "" : field.substr(b, e - b + 1);

            double value = 0.0;
            const auto [ptr, ec] =
                std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                throw ParseError(file.string() + ": line " + std::to_string(line_no) +
                                 ", field " + std::to_string(field_no) + ": '" + field +
                                 "' is not a number");
            }
            row.push_back(value);
            if (comma == std::string::npos) break;
            start = comma + 1;
            ++field_no;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(file.string() + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(file.string() + ": no rows");

    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

}  // namespace pdop
