#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qpt/sweep.hpp"

namespace qpt {

/// 17 significant digits, round-trip exact for doubles.
std::string format_double(double v);

/// Applies the transform to one value (lg_nf_split keeps the sign of v).
double apply_log_scale(LogScale s, double v);

/// Header name after emission: columns eligible for the active scale get a prefix.
std::string emitted_name(const Column& c, LogScale active);

/// Header row, one line per grid row, LF endings, masked cells as MASKED:<code>.
/// The trailing mask column holds 0 or the first masked code of the row.
void write_csv(std::ostream& os, const SweepResult& r, LogScale active);

/// {"axes": {...}, "columns": {...}, "meta": meta} with the row order recorded in meta.
nlohmann::json to_json(const SweepResult& r, LogScale active, nlohmann::json meta);

}  // namespace qpt
