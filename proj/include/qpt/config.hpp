#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qpt/sweep.hpp"

namespace qpt {

enum class OutputFormat { Csv, Json };

/// Sweep spec plus output settings, resolved from a flat JSON object.
///
/// Keys: b | g (number arrays), kappa, l_start, l_stop, steps, alpha,
/// theta_plus_phi (array) | theta_plus_phi_grid (count over [0, 2 pi)),
/// observables (family names), pump_phase ("0" | "pi/2"), threads, output,
/// format ("csv" | "json"), log_scale. Figure files may add version, figure,
/// description and assumptions.
struct CliConfig {
    SweepSpec spec;
    std::string output;  // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    LogScale log_scale = LogScale::None;
    nlohmann::json effective;  // merged object echoed into meta
};

/// Reads a JSON object from disk. IoFailure if unreadable, SpecError if not an object.
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Overlays patch onto base. Keys from mutually exclusive groups (b/g,
/// theta_plus_phi/theta_plus_phi_grid) in the patch evict the sibling in base.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& patch);

/// Validates keys and values and builds the config. Unknown keys raise SpecError.
CliConfig resolve_config(const nlohmann::json& merged);

/// Figure config path for an id; UnknownFigure for ids outside the catalogue.
std::filesystem::path figure_config_path(const std::filesystem::path& dir, const std::string& id);

inline constexpr const char* figure_ids[] = {
    "fig2",       "fig3a", "fig3b",      "fig4",
    "s_homodyne", "s_nf",  "s_epr_grid", "s_susceptibility",
    "s_inverse_variance",  "s_two_mode_sensing",  "s_near_ep",
};

}  // namespace qpt
