#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "golden_values.hpp"
#include "qpt/epr.hpp"

using namespace qpt;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double eta_ep_printed(double kappa, double l) {
    const double x = kappa * l;
    const double num = (x * x + 1) * (x * x + 1) +
                       4 * (x * x * std::cosh(2 * x) -
                            x * std::cosh(x) * std::sqrt(1 + x * x * x * x + 2 * x * x * std::cosh(2 * x)));
    return std::sqrt(num / (16 * (x * x - 1) * (x * x - 1)));
}

// Smallest ET1 at the optimal phase over 2 kappa l in (0, 12].
double min_et_opt(double b) {
    const PtParams p = params_from_b(b, 0.5);
    double best = INFINITY;
    for (int k = 1; k <= 2400; ++k) {
        try {
            best = std::min(best, epr_optimal(p, 12.0 * k / 2400).value);
        } catch (const Error&) {
        }
    }
    return best;
}

}  // namespace

TEST_CASE("EPR at l = 0 is exactly the vacuum value") {
    for (double b : {0.0, 0.5, 1.0, 2.0}) {
        const auto e = epr_criteria(params_from_b(b, 0.5), 0.0, {0.4, 1.1});
        CHECK(e.et1 == 1.0);
        CHECK(e.et2 == 1.0);
        CHECK_FALSE(e.weak1);
        const auto s = epr_sum_variances(params_from_b(b, 0.5), 0.0, {0.4, 1.1});
        CHECK(s.x1_minus_y1 == 0.5);
        CHECK(s.x2_plus_y2 == 0.5);
    }
}

TEST_CASE("EPR sums and criteria match frozen high-precision values") {
    for (const auto& pt : golden::points) {
        const PtParams p = params_from_b(pt.b, golden::kappa);
        const double l = pt.two_kappa_l / (2 * golden::kappa);
        const EprAngles a{golden::angle_sum, 0.0};
        const auto s = epr_sum_variances(p, l, a);
        CHECK(rel(s.x1_minus_y1, pt.epr[0]) < 1e-11);
        CHECK(rel(s.x2_plus_y2, pt.epr[1]) < 1e-11);
        CHECK(rel(s.x1_plus_y1, pt.epr[2]) < 1e-11);
        CHECK(rel(s.x2_minus_y2, pt.epr[3]) < 1e-11);
        const auto e = epr_criteria(p, l, a);
        CHECK(rel(e.et1, pt.epr[4]) < 1e-11);
        CHECK(rel(e.et2, pt.epr[5]) < 1e-11);
        CHECK(e.strong1 == (e.et1 < 0.5));
        CHECK(e.weak2 == (e.et2 < 1.0));
    }
}

TEST_CASE("property: ET identities in the angle sum") {
    for (double b : {0.0, 0.2, 0.6, 1.3, 2.0}) {
        const PtParams p = params_from_b(b, 0.5);
        for (double l : {0.4, 2.2, 5.5, 9.1}) {
            for (double s = -3.0; s <= 3.0; s += 0.5) {
                try {
                    const auto e = epr_criteria(p, l, {s, 0.0});
                    const auto f = epr_criteria(p, l, {-s, 0.0});
                    CHECK(rel(e.et1, f.et2) < 1e-10);
                    for (double d : {0.3, -1.7}) {
                        CHECK(rel(epr_criteria(p, l, {s + d, -d}).et1, e.et1) < 1e-10);
                    }
                } catch (const Error& err) {
                    CHECK(err.code() == ErrorCode::SingularLength);
                }
            }
            try {
                const auto o = epr_optimal(p, l);
                CHECK(rel(o.value, epr_criteria(p, l, {1.5 * pi, 0.0}).et1) < 1e-12);
                CHECK(rel(o.value, epr_criteria(p, l, {0.5 * pi, 0.0}).et2) < 1e-10);
                CHECK(o.lower_bound <= o.value * (1 + 1e-12));
            } catch (const Error& err) {
                CHECK(err.code() == ErrorCode::SingularLength);
            }
        }
    }
}

TEST_CASE("EP band agrees with the reduced exceptional-point forms") {
    const PtParams ep = params_from_b(1.0, 0.5);
    for (double l : {0.3, 1.0, 2.4, 5.0, 9.0, 17.0}) {
        for (double s : {0.0, 1.0, 1.5 * pi}) {
            const auto a = epr_criteria(ep, l, {s, 0.0});
            const auto r = epr_criteria_at_ep(0.5, l, {s, 0.0});
            CHECK(rel(a.et1, r.et1) < 1e-7);
            CHECK(rel(a.et2, r.et2) < 1e-7);
        }
        CHECK(std::abs(eta_covariance(ep, l) - eta_ep(0.5, l)) < 1e-7);
    }
    CHECK_THROWS_AS(epr_criteria(ep, 2.0, {0.0, 0.0}), Error);
}

TEST_CASE("rationalized eta at the EP equals the printed form") {
    for (double l : {0.2, 0.6, 1.2, 3.0, 4.0}) {
        CHECK(std::abs(eta_ep(0.5, l) - eta_ep_printed(0.5, l)) < 1e-9 * eta_ep(0.5, l));
    }
}

TEST_CASE("eta and logarithmic negativity") {
    for (double b : {0.0, 0.4, 1.0, 2.0}) {
        const PtParams p = params_from_b(b, 0.5);
        CHECK(eta_covariance(p, 0.0) == 0.25);
        CHECK(eta_closed(p, 0.0) == 0.25);
        CHECK(log_negativity(p, 0.0) == 0.0);
    }
    for (const auto& pt : golden::points) {
        const PtParams p = params_from_b(pt.b, golden::kappa);
        const double l = pt.two_kappa_l / (2 * golden::kappa);
        CHECK(std::abs(eta_closed(p, l) - pt.eta) < 1e-12 * pt.eta);
        CHECK(std::abs(eta_covariance(p, l) - pt.eta) < 1e-9 * pt.eta);
        CHECK(rel(log_negativity(p, l), pt.log_neg) < 1e-9);
    }
}

TEST_CASE("property: eta from both paths agrees grid-wide") {
    for (double b = 0.0; b <= 2.0; b += 0.1) {
        const PtParams p = params_from_b(b, 0.5);
        for (double l = 0.02; l <= 12.0; l += 0.02) {
            try {
                // Scaled tolerance: eta itself falls to ~1e-8 under strong squeezing.
                const double a = eta_closed(p, l), c = eta_covariance(p, l);
                CHECK(std::abs(a - c) <= 1e-8 * std::max(1.0, a));
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::SingularLength);
            }
        }
    }
}

TEST_CASE("negativity touches zero at the valleys for b < 1 and stays positive for b = 2") {
    const PtParams p = params_from_b(0.2, 0.5);
    for (int n = 1; n <= 4; ++n) {
        CHECK(log_negativity(p, n * pi / p.beta.real()) < 1e-9);
    }
    const PtParams q = params_from_b(2.0, 0.5);
    for (double x = 1.0; x <= 10.0; x += 0.01) {
        try {
            CHECK(log_negativity(q, x) > 0.0);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SingularLength);
        }
    }
}

TEST_CASE("covariance matrix structure") {
    const auto q = covariance_matrix(params_from_b(0.3, 0.5), 2.0);
    CHECK(q.cov(0, 1) == 0.0);
    CHECK(q.cov(0, 2) == 0.0);
    CHECK(q.cov(1, 3) == 0.0);
    CHECK(q.cov(2, 3) == 0.0);
    CHECK(q.cov(0, 3) == q.cov(3, 0));
    CHECK(q.cov(1, 2) == q.cov(2, 1));
    // Same-quadrature cross terms shrink Sigma below 2 sqrt(det V).
    Eigen::Matrix4d bad = 0.25 * Eigen::Matrix4d::Identity();
    bad(0, 2) = bad(2, 0) = 0.2;
    bad(1, 3) = bad(3, 1) = 0.2;
    try {
        eta_from_covariance(bad);
        FAIL("expected NegativeDiscriminant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeDiscriminant);
    }
}

TEST_CASE("strong EPR region closes between b = 0.2 and b = 1") {
    CHECK(min_et_opt(0.2) < 0.5);
    CHECK(min_et_opt(1.0) > 0.5);
    // Locate the boundary with a bracketing solver.
    std::uintmax_t iters = 40;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        [](double b) { return min_et_opt(b) - 0.5; }, 0.2, 1.0 - 1e-3, boost::math::tools::eps_tolerance<double>(20),
        iters);
    const double b_star = 0.5 * (lo + hi);
    MESSAGE("strong-criterion boundary b* = " << b_star);
    CHECK(b_star > 0.40);
    CHECK(b_star < 0.45);
}

TEST_CASE("optimal-phase equality residual vanishes where the bound is tight") {
    const PtParams p = params_from_b(0.3, 0.5);
    for (double l : {0.5, 1.7, 3.3}) {
        const double r = epr_equality_residual(p, l);
        const auto o = epr_optimal(p, l);
        if (std::abs(r) < 1e-12) CHECK(rel(o.value, o.lower_bound) < 1e-9);
    }
    CHECK(std::isfinite(epr_equality_residual(p, 2.0)));
}
