#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdop/constellation.hpp"
#include "pdop/dop_analysis.hpp"
#include "pdop/errors.hpp"
#include "pdop/montecarlo.hpp"
#include "pdop/report.hpp"
#include "pdop/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitStatFail = 4;

struct CommonArgs {
    std::string scenario;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_output) {
    cmd->add_option("--scenario", args.scenario, "Scenario file (JSON)")->required();
    cmd->add_option("--set", args.sets,
                    "Override a scenario value by dotted path, e.g. error_model.gamma_m2=2.5")
        ->take_all();
    cmd->add_option("--seed", args.seed, "Shorthand for --set mc.seed=N");
    cmd->add_option("--samples", args.samples, "Shorthand for --set mc.n_samples=N");
    if (with_output) {
        cmd->add_option("--out", args.out, "Report file to write");
        cmd->add_option("--format", args.format, "Report format")
            ->check(CLI::IsMember({"csv", "structured"}));
    }
}

std::vector<std::string> effective_overrides(const CommonArgs& args) {
    std::vector<std::string> overrides = args.sets;
    if (args.seed) overrides.push_back("mc.seed=" + std::to_string(*args.seed));
    if (args.samples) overrides.push_back("mc.n_samples=" + std::to_string(*args.samples));
    return overrides;
}

pdop::Provenance make_provenance(const std::string& command, const CommonArgs& args) {
    pdop::Provenance p;
    p.command = command;
    p.scenario_path = args.scenario;
    p.overrides = effective_overrides(args);
    p.seed = args.seed;
    p.n_samples = args.samples;
    return p;
}

void write_outputs(const pdop::Table& table, const pdop::Provenance& provenance,
                   const CommonArgs& args) {
    if (args.out.empty()) return;
    if (args.format == "csv") {
        pdop::write_text_file(args.out, pdop::to_csv(table));
        pdop::write_text_file(args.out + ".meta.json", pdop::provenance_sidecar(provenance));
    } else {
        pdop::write_text_file(args.out, pdop::to_structured(table, provenance));
    }
}

std::string fmt7(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.7f", v);
    return buffer;
}

const char* kind_name(pdop::CovarianceSpec::Kind kind) {
    using Kind = pdop::CovarianceSpec::Kind;
    switch (kind) {
        case Kind::ScaledIdentity: return "scaled_identity";
        case Kind::CompositeDiagonal: return "composite(diagonal)";
        case Kind::CompositeMatrix: return "composite(matrix)";
        case Kind::CompositeScintillation: return "composite(scintillation)";
        case Kind::FullMatrix: return "full";
    }
    return "?";
}

void merge_into(pdop::Row& target, const pdop::Row& extra) {
    for (const auto& [key, value] : extra.items()) target[key] = value;
}

pdop::Row analysis_row(const pdop::AssembledScenario& assembled,
                       const pdop::GeodeticPosition& receiver) {
    pdop::Row row = pdop::Row::object();
    row["n_satellites"] = static_cast<std::uint64_t>(assembled.design.size());
    const pdop::DopReport dop = pdop::pdop(assembled.design, assembled.assumed);
    merge_into(row, pdop::dop_report_row(dop));
    const pdop::EnuDop enu = pdop::dop_enu(assembled.design, assembled.assumed, receiver);
    row["hdop"] = enu.hdop;
    row["vdop"] = enu.vdop;
    if (assembled.truth) {
        merge_into(row, pdop::mismatch_report_row(pdop::expected_sq_error(
                            assembled.design, assembled.assumed, *assembled.truth,
                            assembled.bias)));
    }
    return row;
}

int cmd_dop(const CommonArgs& args) {
    const pdop::Scenario scenario =
        pdop::load_scenario(args.scenario, effective_overrides(args));
    const pdop::AssembledScenario assembled = pdop::assemble(scenario);
    const pdop::DopReport report = pdop::pdop(assembled.design, assembled.assumed);

    std::cout << "PDOP = " << fmt7(report.pdop) << "\n"
              << "RMS = " << fmt7(report.rms_m) << " m\n"
              << "sigma_x = " << fmt7(report.sigma_x_m) << " m\n"
              << "sigma_y = " << fmt7(report.sigma_y_m) << " m\n"
              << "sigma_z = " << fmt7(report.sigma_z_m) << " m\n"
              << "kappa = " << fmt7(report.kappa_m2) << " m^2\n";

    pdop::Table table;
    table.rows.push_back(analysis_row(assembled, scenario.receiver));
    write_outputs(table, make_provenance("dop", args), args);
    return kExitOk;
}

int cmd_mismatch(const CommonArgs& args) {
    const pdop::Scenario scenario =
        pdop::load_scenario(args.scenario, effective_overrides(args));
    if (!scenario.true_error_model) {
        throw pdop::ValidationError("mismatch analysis needs a true_error_model in the scenario");
    }
    const pdop::AssembledScenario assembled = pdop::assemble(scenario);
    const pdop::MismatchReport report = pdop::expected_sq_error(
        assembled.design, assembled.assumed, *assembled.truth, assembled.bias);

    std::cout << "optimism_ratio = " << fmt7(report.optimism_ratio) << "\n"
              << "expected_sq_error = " << fmt7(report.expected_sq_error_m2) << " m^2\n"
              << "pdop_predicted_sq_error = " << fmt7(report.pdop_predicted_sq_error_m2)
              << " m^2\n"
              << "bias_sq = " << fmt7(report.bias_sq_m2) << " m^2\n";

    pdop::Table table;
    table.rows.push_back(analysis_row(assembled, scenario.receiver));
    write_outputs(table, make_provenance("mismatch", args), args);
    return kExitOk;
}

int cmd_mc(const CommonArgs& args) {
    const pdop::Scenario scenario =
        pdop::load_scenario(args.scenario, effective_overrides(args));
    const pdop::AssembledScenario assembled = pdop::assemble(scenario);
    const pdop::McReport report = pdop::run_mc(scenario, args.threads);

    pdop::Row row = analysis_row(assembled, scenario.receiver);
    merge_into(row, pdop::mc_report_row(report));
    pdop::Table table;
    table.rows.push_back(row);

    pdop::Provenance provenance = make_provenance("mc", args);
    provenance.seed = report.seed;
    provenance.n_samples = report.n_samples;
    write_outputs(table, provenance, args);

    const bool pass = std::abs(report.z_score) <= 3.0;
    std::cout << "n_samples = " << report.n_samples << "\n"
              << "empirical_mean_sq_error = " << fmt7(report.empirical_mean_sq_error_m2)
              << " m^2\n"
              << "analytic_sq_error = " << fmt7(report.analytic_sq_error_m2) << " m^2\n"
              << "standard_error = " << fmt7(report.standard_error_m2) << " m^2\n"
              << "z_score = " << fmt7(report.z_score) << "\n"
              << (pass ? "PASS" : "FAIL") << " (|z| <= 3)\n";
    return pass ? kExitOk : kExitStatFail;
}

int cmd_sweep(const CommonArgs& args) {
    std::string axis;
    std::vector<std::string> values;
    std::vector<std::string> base;
    for (const std::string& s : args.sets) {
        if (s.rfind("sweep.axis=", 0) == 0) {
            axis = s.substr(11);
        } else if (s.rfind("sweep.values=", 0) == 0) {
            const std::string list = s.substr(13);
            std::size_t start = 0;
            while (start <= list.size()) {
                const std::size_t comma = list.find(',', start);
                values.push_back(list.substr(
                    start, comma == std::string::npos ? std::string::npos : comma - start));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        } else {
            base.push_back(s);
        }
    }
    if (axis.empty()) {
        throw pdop::ValidationError("sweep needs --set sweep.axis=<scenario path>");
    }
    if (values.empty() || (values.size() == 1 && values[0].empty())) {
        throw pdop::ValidationError("sweep needs --set sweep.values=v1,v2,...");
    }
    if (args.seed) base.push_back("mc.seed=" + std::to_string(*args.seed));
    if (args.samples) base.push_back("mc.n_samples=" + std::to_string(*args.samples));

    pdop::Table table;
    for (const std::string& value : values) {
        pdop::Row row = pdop::Row::object();
        pdop::Row parsed = pdop::Row::parse(value, nullptr, false);
        row[axis] = parsed.is_discarded() ? pdop::Row(value) : parsed;
        try {
            std::vector<std::string> overrides = base;
            overrides.push_back(axis + "=" + value);
            const pdop::Scenario scenario = pdop::load_scenario(args.scenario, overrides);
            const pdop::AssembledScenario assembled = pdop::assemble(scenario);
            merge_into(row, analysis_row(assembled, scenario.receiver));
            std::cout << axis << "=" << value << ": PDOP = "
                      << fmt7(row["pdop"].get<double>()) << "\n";
        } catch (const pdop::Error& e) {
            row["error"] = e.name();
            std::cout << axis << "=" << value << ": error " << e.name() << "\n";
        }
        table.rows.push_back(std::move(row));
    }

    pdop::Provenance provenance = make_provenance("sweep", args);
    provenance.overrides = args.sets;
    write_outputs(table, provenance, args);
    return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
    const pdop::Scenario scenario =
        pdop::load_scenario(args.scenario, effective_overrides(args));
    std::cout << "scenario OK: " << scenario.satellites.size() << " satellites, mask "
              << fmt7(scenario.mask_elevation_deg) << " deg\n"
              << "error_model: " << kind_name(scenario.error_model.kind()) << "\n"
              << "true_error_model: "
              << (scenario.true_error_model ? kind_name(scenario.true_error_model->kind())
                                            : "none")
              << "\n";
    if (scenario.mc) {
        std::cout << "mc: n_samples=" << scenario.mc->n_samples << " seed=" << scenario.mc->seed
                  << "\n";
    } else {
        std::cout << "mc: none\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted GNSS position DOP, covariance-mismatch and Monte Carlo analysis"};
    app.set_version_flag("--version", pdop::kToolVersion);
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* dop = app.add_subcommand("dop", "PDOP/RMS report for a scenario");
    add_common(dop, args, true);
    CLI::App* mismatch =
        app.add_subcommand("mismatch", "Expected error under a mismatched noise model");
    add_common(mismatch, args, true);
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo validation of the analytic error");
    add_common(mc, args, true);
    mc->add_option("--threads", args.threads,
                   "Worker threads (0 = all cores); the report bytes do not depend on it");
    CLI::App* sweep = app.add_subcommand("sweep", "One report row per value of a swept key");
    add_common(sweep, args, true);
    CLI::App* validate = app.add_subcommand("validate", "Check a scenario file and exit");
    add_common(validate, args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (dop->parsed()) return cmd_dop(args);
        if (mismatch->parsed()) return cmd_mismatch(args);
        if (mc->parsed()) return cmd_mc(args);
        if (sweep->parsed()) return cmd_sweep(args);
        return cmd_validate(args);
    } catch (const pdop::DegenerateGeometry& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const pdop::InsufficientSatellites& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const pdop::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
