#include "qpt/emit.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace qpt {

namespace {

std::string masked(ErrorCode code) { return "MASKED:" + std::string(to_string(code)); }

std::optional<ErrorCode> row_mask(const SweepResult& r, std::size_t row) {
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        if (auto m = r.mask(row, c)) return m;
    }
    return std::nullopt;
}

double emitted_value(const SweepResult& r, std::size_t row, std::size_t col, LogScale active) {
    const double v = r.value(row, col);
    return r.columns[col].scale == active ? apply_log_scale(active, v) : v;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double apply_log_scale(LogScale s, double v) {
    switch (s) {
        case LogScale::None: return v;
        case LogScale::Log4: return std::log(v) / std::log(4.0);
        case LogScale::LgNfSplit: return v >= 0.0 ? std::log10(v + 1.0) : -std::log10(-v + 1.0);
        case LogScale::Log10Plus1: return std::log10(v + 1.0);
    }
    return v;
}

std::string emitted_name(const Column& c, LogScale active) {
    if (active == LogScale::None || c.scale != active) return c.name;
    return std::string(to_string(active)) + "_" + c.name;
}

void write_csv(std::ostream& os, const SweepResult& r, LogScale active) {
    for (const auto& a : r.axis_names) os << a << ',';
    for (const auto& c : r.columns) os << emitted_name(c, active) << ',';
    os << "mask\n";
    for (std::size_t row = 0; row < r.rows; ++row) {
        for (std::size_t a = 0; a < r.axes.size(); ++a) os << format_double(r.coord(row, a)) << ',';
        for (std::size_t c = 0; c < r.columns.size(); ++c) {
            if (auto m = r.mask(row, c)) {
                os << masked(*m);
            } else {
                os << format_double(emitted_value(r, row, c, active));
            }
            os << ',';
        }
        const auto m = row_mask(r, row);
        os << (m ? masked(*m) : std::string("0")) << '\n';
    }
}

nlohmann::json to_json(const SweepResult& r, LogScale active, nlohmann::json meta) {
    nlohmann::json axes = nlohmann::json::object();
    for (std::size_t a = 0; a < r.axes.size(); ++a) axes[r.axis_names[a]] = r.axes[a];

    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        nlohmann::json col = nlohmann::json::array();
        for (std::size_t row = 0; row < r.rows; ++row) {
            if (auto m = r.mask(row, c)) {
                col.push_back(masked(*m));
            } else {
                col.push_back(emitted_value(r, row, c, active));
            }
        }
        cols[emitted_name(r.columns[c], active)] = std::move(col);
    }
    nlohmann::json mask = nlohmann::json::array();
    for (std::size_t row = 0; row < r.rows; ++row) {
        const auto m = row_mask(r, row);
        if (m) {
            mask.push_back(masked(*m));
        } else {
            mask.push_back(0);
        }
    }
    cols["mask"] = std::move(mask);

    meta["row_order"] = r.axis_names;
    meta["rows"] = r.rows;
    meta["masked_rows"] = r.masked_rows();
    meta["masked_cells"] = r.masked_cells();
    meta["log_scale"] = std::string(to_string(active));
    nlohmann::json out;
    out["axes"] = std::move(axes);
    out["columns"] = std::move(cols);
    out["meta"] = std::move(meta);
    return out;
}

}  // namespace qpt
