#include "qpt/epr.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qpt/kernel.hpp"
#include "state_forms.hpp"

namespace qpt {

using detail::Kernel;
using detail::Sides;

namespace {

struct Coefficients {
    cx u1, u2, v1, v2, xi;
};

Coefficients coefficients(const Kernel& k) {
    const cx se2 = k.se * k.se, sb2 = k.sb * k.sb;
    return {k.sm * k.sm, k.sp * k.sp, k.em * k.em * se2 + sb2, k.ep * k.ep * se2 + sb2,
            2.0 * k.se * k.sb * std::cosh(0.5 * k.g * k.l)};
}

std::array<double, 4> raw_sums(const Kernel& k, const EprAngles& a) {
    const auto [u1, u2, v1, v2, xi] = coefficients(k);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const double cf = std::cos(a.lo_phase_s), sf = std::sin(a.lo_phase_s);
    const cx norm = 4.0 * u1 * u2;
    const cx amp = v1 * (u1 * ct * ct + u2 * cf * cf) + v2 * (u2 * st * st + u1 * sf * sf);
    const cx amp_x = 2.0 * xi * (u1 * sf * ct + u2 * cf * st);
    const cx ph = v1 * (u1 * st * st + u2 * sf * sf) + v2 * (u2 * ct * ct + u1 * cf * cf);
    const cx ph_x = 2.0 * xi * (u1 * cf * st + u2 * sf * ct);
    return {realize((amp + amp_x) / norm), realize((ph + ph_x) / norm), realize((amp - amp_x) / norm),
            realize((ph - ph_x) / norm)};
}

std::array<double, 2> raw_et(const Kernel& k, double s) {
    const cx u1 = k.sm * k.sm, u2 = k.sp * k.sp;
    const cx pre = (u1 + u2) / (2.0 * u1 * u2);
    const cx base = std::cosh(k.g * k.l) * k.se * k.se + k.sb * k.sb;
    const cx cross = 2.0 * std::cosh(0.5 * k.g * k.l) * k.sb * k.se * std::sin(s);
    return {realize(pre * (base + cross)), realize(pre * (base - cross))};
}

std::array<double, 2> raw_optimal(const Kernel& k) {
    const cx a = k.em * k.se - k.sb;
    const cx c = k.ep * k.se - k.sb;
    const cx value = (1.0 / (4.0 * k.sm * k.sm) + 1.0 / (4.0 * k.sp * k.sp)) * (a * a + c * c);
    const cx half = a / (2.0 * k.sm) + c / (2.0 * k.sp);
    return {realize(value), realize(half * half)};
}

std::array<double, 6> raw_covariance(const Kernel& k) {
    // qi0, pi0, qsl, psl, <q_i(0) p_s(l)>, <p_i(0) q_s(l)>
    const auto c = detail::covariance_entries(k);
    std::array<double, 6> r{};
    for (int i = 0; i < 6; ++i) r[i] = realize(c[i]);
    return r;
}

Eigen::Matrix4d assemble(const std::array<double, 6>& c) {
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v(0, 0) = c[0];
    v(1, 1) = c[1];
    v(2, 2) = c[2];
    v(3, 3) = c[3];
    v(0, 3) = v(3, 0) = c[4];
    v(1, 2) = v(2, 1) = c[5];
    return v;
}

EprResult classify(double et1, double et2) {
    EprResult r;
    r.et1 = et1;
    r.et2 = et2;
    r.strong1 = et1 < 0.5;
    r.weak1 = et1 < 1.0;
    r.strong2 = et2 < 0.5;
    r.weak2 = et2 < 1.0;
    return r;
}

}  // namespace

EprSums epr_sum_variances(const PtParams& p, double l, const EprAngles& angles) {
    detail::require_length(l);
    if (l == 0.0) return {};
    const auto v = detail::evaluate(p, l, Sides::Both,
                                    [&angles](const Kernel& k) { return raw_sums(k, angles); });
    return {v[0], v[1], v[2], v[3]};
}

EprResult epr_criteria(const PtParams& p, double l, const EprAngles& angles) {
    detail::require_length(l);
    if (l == 0.0) return classify(1.0, 1.0);
    const double s = angles.theta + angles.lo_phase_s;
    const auto e = detail::evaluate(p, l, Sides::Both, [s](const Kernel& k) { return raw_et(k, s); });
    return classify(e[0], e[1]);
}

EprResult epr_criteria_at_ep(double kappa, double l, const EprAngles& angles) {
    const double x = kappa * l;
    const double s = std::sin(angles.theta + angles.lo_phase_s);
    const double pre = std::exp(-2.0 * x) * (x * x + 1.0) / (2.0 * (x * x - 1.0) * (x * x - 1.0));
    const double base = 1.0 + std::exp(4.0 * x) + 2.0 * x * x * std::exp(2.0 * x);
    const double cross = 2.0 * x * std::exp(x) * (std::exp(2.0 * x) + 1.0) * s;
    return classify(pre * (base + cross), pre * (base - cross));
}

EprOptimal epr_optimal(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return {};
    const auto v = detail::evaluate(p, l, Sides::Both, raw_optimal);
    return {v[0], v[1]};
}

double epr_equality_residual(const PtParams& p, double l) {
    return detail::evaluate(p, l, Sides::Both, [](const Kernel& k) {
        return realize((k.ep * k.se - k.sb) * k.sp - (k.em * k.se - k.sb) * k.sm);
    });
}

QuadCovariance covariance_matrix(const PtParams& p, double l) {
    detail::require_length(l);
    QuadCovariance q;
    if (l == 0.0) return q;
    q.cov = assemble(detail::evaluate(p, l, Sides::Both, raw_covariance));
    return q;
}

double eta_from_covariance(const Eigen::Matrix4d& v) {
    // Blocks in the ordering (q_i, p_i | q_s, p_s). det C = -c1 c2 because the
    // cross block only has off-diagonal entries.
    using ld = long double;
    const ld qi = v(0, 0), pi = v(1, 1), qs = v(2, 2), ps = v(3, 3);
    const ld c1 = v(0, 3), c2 = v(1, 2);
    const ld det_a = qi * pi - ld(v(0, 1)) * v(1, 0);
    const ld det_b = qs * ps - ld(v(2, 3)) * v(3, 2);
    const ld det_c = ld(v(0, 2)) * v(1, 3) - c1 * c2;
    const ld sigma = det_a + det_b - 2.0L * det_c;
    // det V factorizes over the two coupled pairs (q_i, p_s) and (p_i, q_s).
    const ld det_v = (qi * ps - c1 * c1) * (pi * qs - c2 * c2);
    const ld disc = sigma * sigma - 4.0L * det_v;
    if (disc < -1e-12L * std::max(1.0L, sigma * sigma)) {
        throw Error(ErrorCode::NegativeDiscriminant, "Sigma^2 - 4 det V is negative");
    }
    const ld root = std::sqrt(std::max(disc, 0.0L));
    // (Sigma - root)/2 rewritten as 2 det V / (Sigma + root).
    return static_cast<double>(std::sqrt(2.0L * det_v / (sigma + root)));
}

double eta_covariance(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return 0.25;
    return detail::evaluate(p, l, Sides::Both,
                            [](const Kernel& k) { return eta_from_covariance(assemble(raw_covariance(k))); });
}

double eta_closed(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return 0.25;
    return detail::evaluate(p, l, Sides::Both, [](const Kernel& k) {
        const double kap = k.kappa;
        const cx s = k.sb * k.sb;
        const cx b2 = k.beta * k.beta;
        const double ch = std::cosh(k.g * k.l);
        const double ch2 = std::cosh(0.5 * k.g * k.l);
        const cx big_p = (b2 + kap * kap * s) * (b2 + kap * kap * s);
        const cx big_q = b2 * kap * kap * s * ch;
        const cx big_r =
            kap * ch2 * std::sqrt(b2 * s * (2.0 * b2 * kap * kap * s * ch + kap * kap * kap * kap * s * s + b2 * b2));
        // Numerator P + 4(Q - R) of the printed form equals (kappa^2 s - beta^2)^4 / (P + 4Q + 4R),
        // and |g^2 - 4 kappa^2 cos^2(beta l)| = 4 |kappa^2 s - beta^2|.
        const double gap = std::abs(realize(kap * kap * s - b2));
        return gap / (4.0 * std::sqrt(realize(big_p + 4.0 * big_q + 4.0 * big_r)));
    });
}

double eta_ep(double kappa, double l) {
    const double x = kappa * l;
    const double big_p = (x * x + 1.0) * (x * x + 1.0);
    const double big_q = x * x * std::cosh(2.0 * x);
    const double big_r = x * std::cosh(x) * std::sqrt(1.0 + x * x * x * x + 2.0 * x * x * std::cosh(2.0 * x));
    return std::abs(x * x - 1.0) / (4.0 * std::sqrt(big_p + 4.0 * big_q + 4.0 * big_r));
}

double log_negativity(const PtParams& p, double l) {
    const double eta = eta_covariance(p, l);
    return std::max(0.0, -std::log(4.0 * eta));
}

}  // namespace qpt
