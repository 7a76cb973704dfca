#include "qpt/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "qpt/epr.hpp"
#include "qpt/sensing.hpp"

namespace qpt {

namespace {

struct FamilyInfo {
    Family family;
    std::string_view name;
};

constexpr FamilyInfo families[] = {
    {Family::Variances, "variances"}, {Family::Homodyne2, "homodyne2"}, {Family::Nf, "nf"},
    {Family::Corr, "corr"},           {Family::Epr, "epr"},             {Family::Negativity, "negativity"},
    {Family::Sensing, "sensing"},     {Family::Qfi, "qfi"},
};

struct ScaleInfo {
    LogScale scale;
    std::string_view name;
};

constexpr ScaleInfo scales[] = {
    {LogScale::None, "none"},
    {LogScale::Log4, "log4"},
    {LogScale::LgNfSplit, "lg_nf_split"},
    {LogScale::Log10Plus1, "log10_plus1"},
};

// Writes the cells of one family at one grid point; errors mask only the
// cells whose computation raised them.
class Cells {
public:
    Cells(double* values, std::optional<ErrorCode>* masks) : values_(values), masks_(masks) {}

    template <class F>
    void fill(std::size_t first, std::size_t count, F&& compute) {
        try {
            const auto v = compute();
            for (std::size_t i = 0; i < count; ++i) put(first + i, v[i]);
        } catch (const Error& e) {
            for (std::size_t i = 0; i < count; ++i) mask(first + i, e.code());
        }
    }

private:
    void put(std::size_t i, double v) {
        if (std::isfinite(v)) {
            values_[i] = v;
        } else {
            mask(i, ErrorCode::NonFinite);
        }
    }
    void mask(std::size_t i, ErrorCode code) {
        values_[i] = std::numeric_limits<double>::quiet_NaN();
        masks_[i] = code;
    }

    double* values_;
    std::optional<ErrorCode>* masks_;
};

template <class... T>
std::array<double, sizeof...(T)> arr(T... v) {
    return {static_cast<double>(v)...};
}

void eval_family(Family f, const PtParams& p, double l, double angle, const SweepSpec& spec, Cells& c) {
    const CoherentSeed seed{spec.alpha};
    switch (f) {
        case Family::Variances:
            c.fill(0, 4, [&] {
                const auto v = single_mode_variances(p, l);
                return arr(v.qi0, v.psl, v.qsl, v.pi0);
            });
            return;
        case Family::Homodyne2:
            c.fill(0, 2, [&] {
                const auto v = two_mode_variances(p, l);
                return arr(v.d1, v.d2);
            });
            return;
        case Family::Nf:
            c.fill(0, 3, [&] {
                const auto s = photon_number_stats(p, l);
                return arr(s.var_ni, s.var_ns, s.covar);
            });
            c.fill(3, 2, [&] {
                const double nf = noise_figure(p, l);
                return arr(nf, nf - 1.0);
            });
            return;
        case Family::Corr:
            c.fill(0, 4, [&] {
                return arr(correlation_coefficient(p, l, 1, 1, spec.pump_phase),
                           correlation_coefficient(p, l, 1, 2, spec.pump_phase),
                           correlation_coefficient(p, l, 2, 1, spec.pump_phase),
                           correlation_coefficient(p, l, 2, 2, spec.pump_phase));
            });
            return;
        case Family::Epr: {
            const EprAngles a{angle, 0.0};
            c.fill(0, 6, [&] {
                const auto s = epr_sum_variances(p, l, a);
                const auto e = epr_criteria(p, l, a);
                return arr(s.x1_minus_y1, s.x2_plus_y2, s.x1_plus_y1, s.x2_minus_y2, e.et1, e.et2);
            });
            c.fill(6, 2, [&] {
                const auto o = epr_optimal(p, l);
                return arr(o.value, o.lower_bound);
            });
            return;
        }
        case Family::Negativity:
            c.fill(0, 3, [&] {
                const double eta = eta_covariance(p, l);
                return arr(eta, eta_closed(p, l), std::max(0.0, -std::log(4.0 * eta)));
            });
            return;
        case Family::Sensing: {
            std::size_t col = 0;
            for (SensingObservable obs : all_observables) {
                c.fill(col, 4, [&] {
                    const SensingReport r = crlb_report(p, l, seed, obs);
                    return arr(r.chi, r.variance, r.inv_var, r.ratio);
                });
                col += 4;
            }
            c.fill(col, 1, [&] { return arr(qfi_closed(p, l, seed)); });
            return;
        }
        case Family::Qfi:
            c.fill(0, 1, [&] { return arr(qfi_closed(p, l, seed)); });
            c.fill(1, 1, [&] { return arr(qfi_covariance(p, l, seed)); });
            return;
    }
}

}  // namespace

std::string_view to_string(Family f) {
    for (const auto& i : families) {
        if (i.family == f) return i.name;
    }
    return "unknown";
}

Family family_from_string(std::string_view name) {
    for (const auto& i : families) {
        if (i.name == name) return i.family;
    }
    throw Error(ErrorCode::SpecError, "unknown observable family: " + std::string(name));
}

std::string_view to_string(LogScale s) {
    for (const auto& i : scales) {
        if (i.scale == s) return i.name;
    }
    return "unknown";
}

LogScale log_scale_from_string(std::string_view name) {
    for (const auto& i : scales) {
        if (i.name == name) return i.scale;
    }
    throw Error(ErrorCode::SpecError, "unknown log scale: " + std::string(name));
}

std::vector<Column> family_columns(Family f) {
    switch (f) {
        case Family::Variances:
            return {{"var_qi0", LogScale::Log4},
                    {"var_psl", LogScale::Log4},
                    {"var_qsl", LogScale::Log4},
                    {"var_pi0", LogScale::Log4}};
        case Family::Homodyne2: return {{"d1", LogScale::Log4}, {"d2", LogScale::Log4}};
        case Family::Nf:
            return {{"var_ni"}, {"var_ns"}, {"covar"}, {"nf"}, {"nf_excess", LogScale::LgNfSplit}};
        case Family::Corr: return {{"c11"}, {"c12"}, {"c21"}, {"c22"}};
        case Family::Epr:
            return {{"x1_minus_y1"}, {"x2_plus_y2"}, {"x1_plus_y1"}, {"x2_minus_y2"},
                    {"et1"},         {"et2"},        {"et_opt"},     {"et_opt_lower"}};
        case Family::Negativity: return {{"eta"}, {"eta_closed"}, {"log_negativity"}};
        case Family::Sensing: {
            std::vector<Column> cols;
            for (SensingObservable obs : all_observables) {
                const std::string n(to_string(obs));
                cols.push_back({"chi_" + n});
                cols.push_back({"var_" + n, LogScale::Log4});
                cols.push_back({"inv_var_" + n, LogScale::Log10Plus1});
                cols.push_back({"ratio_" + n});
            }
            cols.push_back({"qfi", LogScale::Log10Plus1});
            return cols;
        }
        case Family::Qfi:
            return {{"qfi_closed", LogScale::Log10Plus1}, {"qfi_covariance", LogScale::Log10Plus1}};
    }
    return {};
}

std::vector<double> grid_points(const LRange& r) {
    std::vector<double> x(static_cast<std::size_t>(r.steps));
    const long double start = r.start, span = static_cast<long double>(r.stop) - r.start;
    for (int k = 0; k < r.steps; ++k) {
        x[static_cast<std::size_t>(k)] = static_cast<double>(start + k * span / (r.steps - 1));
    }
    return x;
}

void validate(const SweepSpec& spec) {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::SpecError, m); };
    if (spec.b_values.empty()) fail("at least one b value is required");
    for (double b : spec.b_values) {
        if (!std::isfinite(b) || b < 0.0) fail("b values must be finite and non-negative");
    }
    if (!std::isfinite(spec.kappa) || spec.kappa <= 0.0) fail("kappa must be finite and positive");
    const LRange& r = spec.l_range;
    if (r.steps < 2) fail("steps must be at least 2");
    if (!std::isfinite(r.start) || !std::isfinite(r.stop)) fail("length range must be finite");
    if (r.start < 0.0) fail("length range must start at or above 0");
    if (!(r.stop > r.start)) fail("length range stop must exceed start");
    if (!std::isfinite(spec.alpha) || spec.alpha < 0.0) fail("alpha must be finite and non-negative");
    for (double a : spec.angles) {
        if (!std::isfinite(a)) fail("angles must be finite");
    }
    if (spec.families.empty()) fail("at least one observable family is required");
}

unsigned worker_count(const SweepSpec& spec, std::size_t tasks) {
    unsigned n = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QPT_SIM_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<unsigned>(std::clamp<std::size_t>(tasks, 1, n));
}

std::size_t SweepResult::masked_cells() const {
    return static_cast<std::size_t>(std::count_if(masks.begin(), masks.end(), [](const auto& m) { return m.has_value(); }));
}

std::size_t SweepResult::masked_rows() const {
    std::size_t n = 0;
    const std::size_t nc = columns.size();
    for (std::size_t r = 0; r < rows; ++r) {
        const auto first = masks.begin() + static_cast<std::ptrdiff_t>(r * nc);
        if (std::any_of(first, first + static_cast<std::ptrdiff_t>(nc), [](const auto& m) { return m.has_value(); })) ++n;
    }
    return n;
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate(spec);
    SweepResult res;
    const std::vector<double> xs = grid_points(spec.l_range);
    const bool has_angle = !spec.angles.empty();
    const std::vector<double> angles = has_angle ? spec.angles : std::vector<double>{1.5 * std::numbers::pi};

    res.axis_names = {"b", "two_kappa_l"};
    res.axes = {spec.b_values, xs};
    if (has_angle) {
        res.axis_names.emplace_back("theta_plus_phi");
        res.axes.push_back(angles);
    }
    std::vector<std::size_t> offsets;
    for (Family f : spec.families) {
        offsets.push_back(res.columns.size());
        for (Column& c : family_columns(f)) res.columns.push_back(std::move(c));
    }

    const std::size_t nb = spec.b_values.size(), nx = xs.size(), na = angles.size();
    const std::size_t nc = res.columns.size(), naxes = res.axes.size();
    res.rows = nb * nx * na;
    res.coords.resize(res.rows * naxes);
    res.values.assign(res.rows * nc, 0.0);
    res.masks.assign(res.rows * nc, std::nullopt);

    for (std::size_t ib = 0; ib < nb; ++ib) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            for (std::size_t ia = 0; ia < na; ++ia) {
                const std::size_t row = (ib * nx + ix) * na + ia;
                double* c = &res.coords[row * naxes];
                c[0] = spec.b_values[ib];
                c[1] = xs[ix];
                if (has_angle) c[2] = angles[ia];
            }
        }
    }

    // One task per (b, family) block; each writes only its own cells.
    const std::size_t nf = spec.families.size();
    const std::size_t tasks = nb * nf;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            const std::size_t ib = t / nf, jf = t % nf;
            const Family fam = spec.families[jf];
            const PtParams p = params_from_b(spec.b_values[ib], spec.kappa);
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const double l = xs[ix] / (2.0 * spec.kappa);
                for (std::size_t ia = 0; ia < na; ++ia) {
                    const std::size_t at = ((ib * nx + ix) * na + ia) * nc + offsets[jf];
                    Cells cells(&res.values[at], &res.masks[at]);
                    eval_family(fam, p, l, angles[ia], spec, cells);
                }
            }
        }
    };
    const unsigned n = worker_count(spec, tasks);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return res;
}

}  // namespace qpt
