// qpt-sim: sweeps, figure tables and the verification suite.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpt/config.hpp"
#include "qpt/emit.hpp"
#include "qpt/sweep.hpp"
#include "qpt/verify.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_spec = 2;
constexpr int exit_io = 3;
constexpr const char* artifact_version = "1.0.0";

// Flag values; unset optionals leave the config file (or defaults) alone.
struct Flags {
    std::string config;
    std::vector<double> b, g, angles;
    std::optional<double> kappa, l_min, l_max, alpha;
    std::optional<long long> steps, angle_grid, threads;
    std::optional<std::string> pump_phase, output, format, log_scale;
    std::vector<std::string> observables;

    json patch() const {
        json j = json::object();
        if (!b.empty()) j["b"] = b;
        if (!g.empty()) j["g"] = g;
        if (!angles.empty()) j["theta_plus_phi"] = angles;
        if (!observables.empty()) j["observables"] = observables;
        if (kappa) j["kappa"] = *kappa;
        if (l_min) j["l_start"] = *l_min;
        if (l_max) j["l_stop"] = *l_max;
        if (alpha) j["alpha"] = *alpha;
        if (steps) j["steps"] = *steps;
        if (angle_grid) j["theta_plus_phi_grid"] = *angle_grid;
        if (threads) j["threads"] = *threads;
        if (pump_phase) j["pump_phase"] = *pump_phase;
        if (output) j["output"] = *output;
        if (format) j["format"] = *format;
        if (log_scale) j["log_scale"] = *log_scale;
        return j;
    }
};

void add_sweep_flags(CLI::App* cmd, Flags& f, bool with_observables) {
    cmd->add_option("--config", f.config, "flat JSON config file");
    cmd->add_option("--b", f.b, "comma-separated b = g/(2 kappa) values")->delimiter(',');
    cmd->add_option("--g", f.g, "comma-separated gain values (converted with kappa)")->delimiter(',');
    cmd->add_option("--kappa", f.kappa, "conversion rate kappa");
    cmd->add_option("--l-min", f.l_min, "first 2 kappa l value");
    cmd->add_option("--l-max", f.l_max, "last 2 kappa l value");
    cmd->add_option("--steps", f.steps, "number of 2 kappa l points");
    cmd->add_option("--alpha", f.alpha, "coherent seed amplitude");
    cmd->add_option("--theta-plus-phi", f.angles, "comma-separated theta + phi values")->delimiter(',');
    cmd->add_option("--theta-plus-phi-grid", f.angle_grid, "evenly spaced theta + phi values over [0, 2 pi)");
    cmd->add_option("--pump-phase", f.pump_phase, "0 or pi/2");
    cmd->add_option("--threads", f.threads, "worker cap (0: hardware concurrency)");
    cmd->add_option("-o,--output", f.output, "output file (default: standard output)");
    cmd->add_option("--format", f.format, "csv or json");
    cmd->add_option("--log-scale", f.log_scale, "none, log4, lg_nf_split or log10_plus1");
    if (with_observables) {
        cmd->add_option("--observables", f.observables, "comma-separated observable families")->delimiter(',');
    }
}

json build_meta(const qpt::CliConfig& c, const std::string& command) {
    json meta;
    meta["artifact"] = "qpt-sim";
    meta["version"] = artifact_version;
    meta["command"] = command;
    meta["config"] = c.effective;
    json fams = json::array();
    for (qpt::Family f : c.spec.families) fams.push_back(std::string(qpt::to_string(f)));
    meta["observables"] = fams;
    meta["kappa"] = c.spec.kappa;
    meta["alpha"] = c.spec.alpha;
    meta["pump_phase"] = c.spec.pump_phase == qpt::PumpPhase::Zero ? "0" : "pi/2";
    if (c.spec.angles.empty()) meta["theta_plus_phi_default"] = 1.5 * 3.14159265358979323846;
    if (c.effective.contains("assumptions")) meta["assumptions"] = c.effective["assumptions"];
    return meta;
}

void write_table(const qpt::CliConfig& c, const qpt::SweepResult& r, const std::string& command) {
    std::ostringstream buf;
    if (c.format == qpt::OutputFormat::Csv) {
        qpt::write_csv(buf, r, c.log_scale);
    } else {
        buf << qpt::to_json(r, c.log_scale, build_meta(c, command)).dump() << '\n';
    }
    const std::string text = buf.str();
    if (c.output.empty()) {
        std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
        std::cout.flush();
        if (!std::cout) throw qpt::Error(qpt::ErrorCode::IoFailure, "cannot write to standard output");
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw qpt::Error(qpt::ErrorCode::IoFailure, "cannot open " + c.output);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw qpt::Error(qpt::ErrorCode::IoFailure, "cannot write " + c.output);
}

// Layers: base (figure file), --config file, flags; a family subcommand pins observables last.
int run_table(const std::string& command, json base, const Flags& f, const char* family = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!f.config.empty()) base = qpt::merge_config(base, qpt::read_config_file(f.config));
    json patch = f.patch();
    if (family != nullptr) patch["observables"] = json::array({family});
    const qpt::CliConfig c = qpt::resolve_config(qpt::merge_config(std::move(base), patch));
    const qpt::SweepResult r = qpt::run_sweep(c.spec);
    write_table(c, r, command);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "qpt-sim %s: rows=%zu masked_rows=%zu masked_cells=%zu elapsed=%.3fs\n", command.c_str(),
                 r.rows, r.masked_rows(), r.masked_cells(), secs);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadrature PT-symmetric twin-beam simulator"};
    app.require_subcommand(1);

    const char* families[] = {"variances", "homodyne2", "nf", "corr", "epr", "negativity", "sensing", "qfi"};
    Flags flags;
    std::vector<std::pair<std::string, CLI::App*>> table_cmds;
    for (const char* fam : families) {
        CLI::App* cmd = app.add_subcommand(fam, std::string("sweep the ") + fam + " observables");
        add_sweep_flags(cmd, flags, false);
        table_cmds.emplace_back(fam, cmd);
    }

    std::string figure_id;
    std::string figure_dir = QPT_FIGURE_DIR;
    CLI::App* fig = app.add_subcommand("figure", "reproduce a stored figure table");
    fig->add_option("id", figure_id, "figure id")->required();
    fig->add_option("--figure-dir", figure_dir, "directory holding <id>.json figure configs");
    add_sweep_flags(fig, flags, true);

    std::string grid = "small";
    CLI::App* ver = app.add_subcommand("verify", "closed forms against the oracles");
    ver->add_option("--grid", grid, "small or full")->check(CLI::IsMember({"small", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_spec;
    }

    try {
        for (const auto& [name, cmd] : table_cmds) {
            if (cmd->parsed()) return run_table(name, json::object(), flags, name.c_str());
        }
        if (fig->parsed()) {
            const json base = qpt::read_config_file(qpt::figure_config_path(figure_dir, figure_id));
            return run_table("figure " + figure_id, base, flags);
        }
        if (ver->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            const qpt::VerifyReport r = qpt::run_verify(grid == "full" ? qpt::GridScale::Full : qpt::GridScale::Small);
            qpt::print_report(std::cout, r);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::fprintf(stderr, "qpt-sim verify: grid=%s checks=%zu elapsed=%.3fs\n", grid.c_str(), r.checks.size(),
                         secs);
            return r.passed() ? exit_ok : exit_verify;
        }
    } catch (const qpt::Error& e) {
        std::fprintf(stderr, "qpt-sim: %s\n", e.what());
        return e.code() == qpt::ErrorCode::IoFailure ? exit_io : exit_spec;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qpt-sim: %s\n", e.what());
        return exit_spec;
    }
    return exit_spec;
}
