#include "qpt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace qpt {

namespace {

using nlohmann::json;

[[noreturn]] void spec_error(const std::string& m) { throw Error(ErrorCode::SpecError, m); }

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "b",           "g",      "kappa",  "l_start",   "l_stop",  "steps",
        "alpha",       "theta_plus_phi",   "theta_plus_phi_grid",  "observables",
        "pump_phase",  "threads", "output", "format",   "log_scale",
        "version",     "figure", "description", "assumptions",
    };
    return keys;
}

double number(const json& j, const char* key) {
    if (!j.is_number()) spec_error(std::string(key) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) spec_error(std::string(key) + " must be finite");
    return v;
}

long long integer(const json& j, const char* key) {
    if (!j.is_number_integer()) spec_error(std::string(key) + " must be an integer");
    return j.get<long long>();
}

std::string text(const json& j, const char* key) {
    if (!j.is_string()) spec_error(std::string(key) + " must be a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key) {
    if (j.is_number()) return {number(j, key)};
    if (!j.is_array()) spec_error(std::string(key) + " must be an array of numbers");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(number(e, key));
    return v;
}

std::vector<std::string> strings(const json& j, const char* key) {
    if (j.is_string()) return {j.get<std::string>()};
    if (!j.is_array()) spec_error(std::string(key) + " must be an array of strings");
    std::vector<std::string> v;
    for (const auto& e : j) v.push_back(text(e, key));
    return v;
}

PumpPhase pump_phase(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "0") return PumpPhase::Zero;
        if (s == "pi/2") return PumpPhase::HalfPi;
        spec_error("pump_phase must be \"0\" or \"pi/2\"");
    }
    const double v = number(j, "pump_phase");
    if (v == 0.0) return PumpPhase::Zero;
    if (std::abs(v - std::numbers::pi / 2.0) < 1e-12) return PumpPhase::HalfPi;
    spec_error("pump_phase must be 0 or pi/2");
}

}  // namespace

json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        spec_error("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) spec_error("config file " + path.string() + " must hold a JSON object");
    return j;
}

json merge_config(json base, const json& patch) {
    if (!base.is_object()) base = json::object();
    const std::pair<const char*, const char*> exclusive[] = {
        {"b", "g"},
        {"theta_plus_phi", "theta_plus_phi_grid"},
    };
    for (const auto& [x, y] : exclusive) {
        if (patch.contains(x)) base.erase(y);
        if (patch.contains(y)) base.erase(x);
    }
    for (const auto& [k, v] : patch.items()) base[k] = v;
    return base;
}

CliConfig resolve_config(const json& merged) {
    if (!merged.is_object()) spec_error("config must be a JSON object");
    for (const auto& [k, v] : merged.items()) {
        if (!known_keys().count(k)) spec_error("unknown config key: " + k);
    }
    auto has = [&](const char* k) { return merged.contains(k); };
    if (has("b") && has("g")) spec_error("b and g are mutually exclusive");
    if (has("theta_plus_phi") && has("theta_plus_phi_grid")) {
        spec_error("theta_plus_phi and theta_plus_phi_grid are mutually exclusive");
    }

    CliConfig c;
    SweepSpec& s = c.spec;
    s.b_values = {0.0, 0.2, 0.5, 0.8, 1.0, 2.0};
    s.l_range = {0.0, 12.0, 600};
    s.families = {Family::Variances};

    if (has("kappa")) s.kappa = number(merged["kappa"], "kappa");
    if (has("b")) s.b_values = numbers(merged["b"], "b");
    if (has("g")) {
        if (!(s.kappa > 0.0)) spec_error("kappa must be positive");
        s.b_values.clear();
        for (double g : numbers(merged["g"], "g")) s.b_values.push_back(g / (2.0 * s.kappa));
    }
    if (has("l_start")) s.l_range.start = number(merged["l_start"], "l_start");
    if (has("l_stop")) s.l_range.stop = number(merged["l_stop"], "l_stop");
    if (has("steps")) {
        const long long n = integer(merged["steps"], "steps");
        if (n < 2 || n > 100'000'000) spec_error("steps must lie in [2, 1e8]");
        s.l_range.steps = static_cast<int>(n);
    }
    if (has("alpha")) s.alpha = number(merged["alpha"], "alpha");
    if (has("theta_plus_phi")) s.angles = numbers(merged["theta_plus_phi"], "theta_plus_phi");
    if (has("theta_plus_phi_grid")) {
        const long long n = integer(merged["theta_plus_phi_grid"], "theta_plus_phi_grid");
        if (n < 1 || n > 100'000) spec_error("theta_plus_phi_grid must lie in [1, 1e5]");
        for (long long k = 0; k < n; ++k) {
            s.angles.push_back(static_cast<double>(2.0L * std::numbers::pi_v<long double> * k / n));
        }
    }
    if (has("observables")) {
        s.families.clear();
        for (const auto& f : strings(merged["observables"], "observables")) s.families.push_back(family_from_string(f));
    }
    if (has("pump_phase")) s.pump_phase = pump_phase(merged["pump_phase"]);
    if (has("threads")) {
        const long long n = integer(merged["threads"], "threads");
        if (n < 0 || n > 4096) spec_error("threads must lie in [0, 4096]");
        s.threads = static_cast<unsigned>(n);
    }
    if (has("output")) c.output = text(merged["output"], "output");
    if (has("format")) {
        const std::string f = text(merged["format"], "format");
        if (f == "csv") {
            c.format = OutputFormat::Csv;
        } else if (f == "json") {
            c.format = OutputFormat::Json;
        } else {
            spec_error("format must be csv or json");
        }
    } else if (c.output.size() >= 5 && c.output.ends_with(".json")) {
        c.format = OutputFormat::Json;
    }
    if (has("log_scale")) c.log_scale = log_scale_from_string(text(merged["log_scale"], "log_scale"));
    if (has("version")) integer(merged["version"], "version");
    if (has("figure")) text(merged["figure"], "figure");
    if (has("description")) text(merged["description"], "description");
    if (has("assumptions")) strings(merged["assumptions"], "assumptions");

    validate(s);
    c.effective = merged;
    return c;
}

std::filesystem::path figure_config_path(const std::filesystem::path& dir, const std::string& id) {
    const bool known = std::any_of(std::begin(figure_ids), std::end(figure_ids), [&](const char* f) { return id == f; });
    if (!known) throw Error(ErrorCode::UnknownFigure, "unknown figure id: " + id);
    return dir / (id + ".json");
}

}  // namespace qpt
