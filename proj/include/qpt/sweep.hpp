#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpt/error.hpp"
#include "qpt/observables.hpp"

namespace qpt {

enum class Family { Variances, Homodyne2, Nf, Corr, Epr, Negativity, Sensing, Qfi };

std::string_view to_string(Family f);
/// Throws SpecError for unknown names.
Family family_from_string(std::string_view name);

/// Emission-time transform a column is eligible for.
enum class LogScale { None, Log4, LgNfSplit, Log10Plus1 };

std::string_view to_string(LogScale s);
LogScale log_scale_from_string(std::string_view name);

/// Length axis in units of 2*kappa*l.
struct LRange {
    double start = 0.01;
    double stop = 12.0;
    int steps = 600;
};

struct SweepSpec {
    std::vector<double> b_values;
    double kappa = 0.5;
    LRange l_range;
    double alpha = 10.0;
    /// theta + phi values (theta carries the angle, lo_phase_s = 0). Empty
    /// means no angle axis; the EPR family then uses 3 pi / 2.
    std::vector<double> angles;
    std::vector<Family> families;
    PumpPhase pump_phase = PumpPhase::Zero;
    /// Worker cap; 0 means hardware concurrency. QPT_SIM_THREADS lowers it further.
    unsigned threads = 0;
};

struct Column {
    std::string name;
    LogScale scale = LogScale::None;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<std::vector<double>> axes;
    std::vector<Column> columns;
    std::size_t rows = 0;
    /// Row-major rows x (axis count) coordinates.
    std::vector<double> coords;
    /// Row-major rows x columns values; entries with a mask hold NaN.
    std::vector<double> values;
    std::vector<std::optional<ErrorCode>> masks;

    double value(std::size_t row, std::size_t col) const { return values[row * columns.size() + col]; }
    std::optional<ErrorCode> mask(std::size_t row, std::size_t col) const {
        return masks[row * columns.size() + col];
    }
    double coord(std::size_t row, std::size_t axis) const { return coords[row * axes.size() + axis]; }
    std::size_t masked_cells() const;
    std::size_t masked_rows() const;
};

/// Columns produced by one family, in emission order.
std::vector<Column> family_columns(Family f);

/// start + k (stop - start) / (steps - 1) evaluated in long double.
std::vector<double> grid_points(const LRange& r);

void validate(const SweepSpec& spec);

/// Worker count after applying spec.threads, QPT_SIM_THREADS and the task count.
unsigned worker_count(const SweepSpec& spec, std::size_t tasks);

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace qpt
