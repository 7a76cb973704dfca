#include "qpt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "qpt/epr.hpp"
#include "qpt/observables.hpp"
#include "qpt/oracle.hpp"
#include "qpt/propagator.hpp"
#include "qpt/sensing.hpp"

namespace qpt {

namespace {

constexpr double kappa = 0.5;
constexpr double alpha = 10.0;

double scaled(double value, double ref) { return std::abs(value - ref) / std::max(1.0, std::abs(ref)); }

struct Point {
    PtParams p;
    double b, x, l;
};

class Check {
public:
    explicit Check(std::string name) { r_.name = std::move(name); }

    // Records one comparison; NaN deviations count as failures.
    void expect(const Point& pt, const std::string& what, double deviation, double tol) {
        ++r_.evaluated;
        if (!(deviation <= tol)) {
            if (r_.failures++ == 0) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "(b=%.6g, 2kl=%.6g, %s) deviation %.3e > %.1e", pt.b, pt.x,
                              what.c_str(), deviation, tol);
                r_.first_failure = buf;
            }
        }
        if (std::isfinite(deviation)) r_.worst = std::max(r_.worst, deviation);
    }

    void run(const std::vector<Point>& grid, const std::function<void(const Point&)>& body) {
        for (const Point& pt : grid) {
            try {
                body(pt);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::SingularLength && e.code() != ErrorCode::SingularRearrangement) {
                    expect(pt, std::string("raised ") + std::string(to_string(e.code())), INFINITY, 0.0);
                } else {
                    ++r_.skipped;
                }
            }
        }
    }

    CheckResult result() const { return r_; }

private:
    CheckResult r_;
};

std::vector<Point> make_grid(GridScale scale) {
    const int nx = scale == GridScale::Small ? 60 : 600;
    std::vector<Point> grid;
    for (int ib = 0; ib <= 20; ++ib) {
        const double b = ib / 10.0;
        if (std::abs(b - 1.0) <= ep_tol) continue;
        const PtParams p = params_from_b(b, kappa);
        for (int k = 1; k <= nx; ++k) {
            const double x = 12.0 * k / nx;
            grid.push_back({p, b, x, x / (2.0 * kappa)});
        }
    }
    return grid;
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

VerifyReport run_verify(GridScale scale) {
    const std::vector<Point> grid = make_grid(scale);
    const CoherentSeed seed{alpha};
    VerifyReport report;
    auto add = [&](const std::string& name, const std::function<void(Check&, const Point&)>& body) {
        Check c(name);
        c.run(grid, [&](const Point& pt) { body(c, pt); });
        report.checks.push_back(c.result());
    };

    add("transfer_vs_oracle", [](Check& c, const Point& pt) {
        for (QuadPair pair : all_pairs) {
            const TransferMatrix2 t = transfer(pt.p, pt.l, pair);
            const auto m = oracle::oracle_boundary_map(oracle::to_eigen(forward_generator(pt.p, pair)), pt.l).m;
            const double got[4] = {t.m11, t.m12, t.m21, t.m22};
            const double ref[4] = {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
            for (int i = 0; i < 4; ++i) c.expect(pt, std::string(to_string(pair)), scaled(got[i], ref[i]), 1e-9);
        }
    });

    add("commutators", [](Check& c, const Point& pt) {
        c.expect(pt, "commutator residual", check_commutators(pt.p, pt.l), 1e-10);
    });

    add("variances_vs_oracle", [](Check& c, const Point& pt) {
        const auto v = single_mode_variances(pt.p, pt.l);
        const auto o = oracle::oracle_output_covariance(pt.p, pt.l).cov;
        c.expect(pt, "var_qi0", scaled(v.qi0, o(0, 0)), 1e-9);
        c.expect(pt, "var_pi0", scaled(v.pi0, o(1, 1)), 1e-9);
        c.expect(pt, "var_qsl", scaled(v.qsl, o(2, 2)), 1e-9);
        c.expect(pt, "var_psl", scaled(v.psl, o(3, 3)), 1e-9);
        const auto q = covariance_matrix(pt.p, pt.l).cov;
        c.expect(pt, "cov_qi0_psl", scaled(q(0, 3), o(0, 3)), 1e-9);
        c.expect(pt, "cov_pi0_qsl", scaled(q(1, 2), o(1, 2)), 1e-9);
        const auto d = two_mode_variances(pt.p, pt.l);
        c.expect(pt, "d1", d.d1 == (v.qi0 + v.qsl) / 2.0 ? 0.0 : 1.0, 0.0);
        c.expect(pt, "d2", d.d2 == (v.pi0 + v.psl) / 2.0 ? 0.0 : 1.0, 0.0);
    });

    add("rism_identities", [](Check& c, const Point& pt) {
        const auto [A, B, C, D, E, F] = rism_coefficients(pt.p, pt.l);
        c.expect(pt, "AB-CD", scaled(A * B - C * D, 1.0) / std::max(1.0, std::abs(A * B)), 1e-10);
        c.expect(pt, "FE-CD", scaled(F * E - C * D, 1.0) / std::max(1.0, std::abs(F * E)), 1e-10);
        c.expect(pt, "AC-DE", std::abs(A * C - D * E) / std::max(1.0, std::abs(A * C)), 1e-10);
        c.expect(pt, "BD-FC", std::abs(B * D - F * C) / std::max(1.0, std::abs(B * D)), 1e-10);
    });

    add("nf_vs_isserlis", [](Check& c, const Point& pt) {
        const auto o = oracle::oracle_output_covariance(pt.p, pt.l);
        const auto m = oracle::oracle_photon_moments(o.cov, o.mean);
        const double nf_oracle = (m.var_ni + m.var_ns - 2.0 * m.covar) / (m.mean_ni + m.mean_ns);
        c.expect(pt, "nf", scaled(noise_figure(pt.p, pt.l), nf_oracle), 1e-9);
        const auto s = photon_number_stats(pt.p, pt.l);
        c.expect(pt, "var_ni", scaled(s.var_ni, m.var_ni), 1e-9);
        c.expect(pt, "var_ns", scaled(s.var_ns, m.var_ns), 1e-9);
        c.expect(pt, "covar", scaled(s.covar, m.covar), 1e-9);
    });

    add("correlation", [](Check& c, const Point& pt) {
        const PumpPhase z = PumpPhase::Zero, h = PumpPhase::HalfPi;
        const double c12 = correlation_coefficient(pt.p, pt.l, 1, 2, z);
        const double c21 = correlation_coefficient(pt.p, pt.l, 2, 1, z);
        c.expect(pt, "c11", std::abs(correlation_coefficient(pt.p, pt.l, 1, 1, z)), 0.0);
        c.expect(pt, "c22", std::abs(correlation_coefficient(pt.p, pt.l, 2, 2, z)), 0.0);
        c.expect(pt, "c12-c21", std::abs(c12 - correlation_coefficient_21_product_form(pt.p, pt.l)), 1e-12);
        c.expect(pt, "c11(pi/2)-c12", std::abs(correlation_coefficient(pt.p, pt.l, 1, 1, h) - c12), 1e-12);
        c.expect(pt, "c22(pi/2)-c21", std::abs(correlation_coefficient(pt.p, pt.l, 2, 2, h) - c21), 1e-12);
        c.expect(pt, "c12(pi/2)", std::abs(correlation_coefficient(pt.p, pt.l, 1, 2, h)), 0.0);
    });

    add("epr_identities", [](Check& c, const Point& pt) {
        for (double s : {0.0, 0.7, 1.5707963267948966, 3.0, 4.71238898038469}) {
            const auto e1 = epr_criteria(pt.p, pt.l, {s, 0.0});
            const auto e2 = epr_criteria(pt.p, pt.l, {-s, 0.0});
            c.expect(pt, "et1(s)-et2(-s)", scaled(e1.et1, e2.et2), 1e-10);
            const auto shifted = epr_criteria(pt.p, pt.l, {s + 0.3, -0.3});
            c.expect(pt, "angle shift", scaled(shifted.et1, e1.et1), 1e-10);
        }
        const auto o = epr_optimal(pt.p, pt.l);
        c.expect(pt, "lower bound", std::max(0.0, o.lower_bound - o.value) / std::max(1.0, o.value), 1e-12);
    });

    add("eta_closed_vs_covariance", [](Check& c, const Point& pt) {
        const double a = eta_closed(pt.p, pt.l), b = eta_covariance(pt.p, pt.l);
        c.expect(pt, "eta", scaled(b, a), 1e-8);
    });

    add("susceptibility_fd", [&seed](Check& c, const Point& pt) {
        for (SensingObservable obs : all_observables) {
            const double chi = susceptibility(pt.p, pt.l, seed, obs);
            auto mean_of = [&](double k) {
                const MeanQuadratures m = mean_quadratures(make_params(pt.p.g, k), pt.l, seed);
                const double r = std::sqrt(0.5);
                switch (obs) {
                    case SensingObservable::Qi0: return m.qi0;
                    case SensingObservable::Pi0: return m.pi0;
                    case SensingObservable::Qsl: return m.qsl;
                    case SensingObservable::Psl: return m.psl;
                    case SensingObservable::D1: return r * (m.qi0 + m.qsl);
                    case SensingObservable::D2: return r * (m.pi0 + m.psl);
                }
                return 0.0;
            };
            const double fd = oracle::finite_difference(mean_of, kappa, 1e-6 * kappa);
            c.expect(pt, "chi_" + std::string(to_string(obs)), std::abs(fd - chi) / (1.0 + std::abs(chi)), 1e-6);
        }
    });

    add("crlb", [&seed](Check& c, const Point& pt) {
        for (SensingObservable obs : all_observables) {
            const SensingReport r = crlb_report(pt.p, pt.l, seed, obs);
            c.expect(pt, "ratio_" + std::string(to_string(obs)), std::max(0.0, r.ratio - 1.0), 1e-9);
        }
    });

    add("two_mode_inequality", [&seed](Check& c, const Point& pt) {
        auto iv = [&](SensingObservable o) { return inverse_variance(pt.p, pt.l, seed, o); };
        const double s1 = iv(SensingObservable::Qi0) + iv(SensingObservable::Qsl);
        const double s2 = iv(SensingObservable::Pi0) + iv(SensingObservable::Psl);
        c.expect(pt, "d1", std::max(0.0, iv(SensingObservable::D1) - s1) / std::max(1.0, s1), 1e-9);
        c.expect(pt, "d2", std::max(0.0, iv(SensingObservable::D2) - s2) / std::max(1.0, s2), 1e-9);
    });

    return report;
}

void print_report(std::ostream& os, const VerifyReport& r) {
    for (const CheckResult& c : r.checks) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s %-26s evaluated=%zu skipped=%zu failures=%zu worst=%.3e\n",
                      c.passed() ? "PASS" : "FAIL", c.name.c_str(), c.evaluated, c.skipped, c.failures, c.worst);
        os << buf;
        if (!c.first_failure.empty()) os << "     first failure " << c.first_failure << '\n';
    }
    os << (r.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
}

}  // namespace qpt
