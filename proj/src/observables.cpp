#include "qpt/observables.hpp"

#include <array>
#include <cmath>

#include "qpt/kernel.hpp"
#include "qpt/propagator.hpp"

namespace qpt {

using detail::Kernel;
using detail::Sides;

namespace {

std::array<double, 4> raw_variances(const Kernel& k) {
    const cx se2 = k.se * k.se, sb2 = k.sb * k.sb;
    const cx sp2 = 4.0 * k.sp * k.sp, sm2 = 4.0 * k.sm * k.sm;
    const double em2 = k.em * k.em, ep2 = k.ep * k.ep;
    return {realize((em2 * se2 + sb2) / sp2), realize((ep2 * se2 + sb2) / sp2),
            realize((em2 * se2 + sb2) / sm2), realize((ep2 * se2 + sb2) / sm2)};
}

std::array<double, 2> raw_cross_correlations(const Kernel& k) {
    const double ch2 = std::cosh(0.5 * k.g * k.l);
    const double ch = std::cosh(k.g * k.l);
    const double num = std::abs(realize(k.se * k.sb));
    const cx se2 = k.se * k.se, sb2 = k.sb * k.sb;
    const double c12 = 2.0 * ch2 * num / std::sqrt(realize(se2 * se2 + sb2 * sb2 + 2.0 * ch * se2 * sb2));
    const double em2 = k.em * k.em, ep2 = k.ep * k.ep;
    const double v1 = realize(em2 * se2 + sb2);
    const double v2 = realize(ep2 * se2 + sb2);
    const double c21 = (k.em + k.ep) * num / std::sqrt(v1 * v2);
    return {c12, c21};
}

std::array<double, 6> raw_rism(const Kernel& k) {
    return {realize(k.em * k.se / k.sp), realize(-k.ep * k.se / k.sm), realize(k.sb / k.sm),
            realize(-k.sb / k.sp),       realize(-k.em * k.se / k.sm), realize(k.ep * k.se / k.sp)};
}

RismCoefficients to_rism(const std::array<double, 6>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5]};
}

double sq(double x) { return x * x; }

PhotonNumberStats stats_from(const RismCoefficients& c) {
    const auto [A, B, C, D, E, F] = c;
    PhotonNumberStats s;
    s.var_ni = (sq(A * A + D * D) + sq(B * B + C * C) - 2.0) / 8.0;
    s.var_ns = (sq(F * F + D * D) + sq(E * E + C * C) - 2.0) / 8.0;
    s.covar = (sq(A * D + D * F) + sq(C * E + B * C)) / 8.0;
    return s;
}

MeanPhotonNumbers means_from(const RismCoefficients& c) {
    const double cd = sq(c.C + c.D);
    return {(sq(c.A - c.B) + cd) / 4.0, (cd + sq(c.E - c.F)) / 4.0};
}

void require_flux(double total) {
    if (total < 1e-12) {
        throw Error(ErrorCode::DegenerateFlux, "total photon flux vanishes");
    }
}

}  // namespace

SingleModeVariances single_mode_variances(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return {};
    const auto v = detail::evaluate(p, l, Sides::Both, raw_variances);
    return {v[0], v[1], v[2], v[3]};
}

TwoModeVariances two_mode_variances(const PtParams& p, double l) {
    const SingleModeVariances v = single_mode_variances(p, l);
    return {(v.qi0 + v.qsl) / 2.0, (v.pi0 + v.psl) / 2.0};
}

double correlation_coefficient(const PtParams& p, double l, int j, int m, PumpPhase phase) {
    if ((j != 1 && j != 2) || (m != 1 && m != 2)) {
        throw Error(ErrorCode::SpecError, "quadrature indices must be 1 or 2");
    }
    detail::require_length(l);
    detail::require_regular(p, l, Sides::Both);
    if (phase == PumpPhase::Zero) {
        if (j == m || l == 0.0) return 0.0;
        const auto c = detail::evaluate(p, l, Sides::Both, raw_cross_correlations);
        return j == 1 ? c[0] : c[1];
    }
    if (j != m || l == 0.0) return 0.0;
    // Pump phase pi/2: {q_i, q_s} and {p_i, p_s} are the coupled pairs.
    const auto t = transfer(p, l, j == 1 ? QuadPair::QiQs_phi90 : QuadPair::PiPs_phi90);
    const double cov = t.m11 * t.m21 + t.m12 * t.m22;
    const double v0 = t.m11 * t.m11 + t.m12 * t.m12;
    const double v1 = t.m21 * t.m21 + t.m22 * t.m22;
    return std::abs(cov) / std::sqrt(v0 * v1);
}

double correlation_coefficient_21_product_form(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return 0.0;
    return detail::evaluate(p, l, Sides::Both, raw_cross_correlations)[1];
}

RismCoefficients rism_coefficients(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return {};
    return to_rism(detail::evaluate(p, l, Sides::Both, raw_rism));
}

PhotonNumberStats photon_number_stats(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return {};
    const auto s = detail::evaluate(p, l, Sides::Both, [](const Kernel& k) {
        const PhotonNumberStats st = stats_from(to_rism(raw_rism(k)));
        return std::array<double, 3>{st.var_ni, st.var_ns, st.covar};
    });
    return {s[0], s[1], s[2]};
}

MeanPhotonNumbers mean_photon_numbers(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) return {};
    const auto n = detail::evaluate(p, l, Sides::Both, [](const Kernel& k) {
        const MeanPhotonNumbers m = means_from(to_rism(raw_rism(k)));
        return std::array<double, 2>{m.ni, m.ns};
    });
    return {n[0], n[1]};
}

double noise_figure(const PtParams& p, double l) {
    detail::require_length(l);
    if (l == 0.0) require_flux(0.0);
    const auto r = detail::evaluate(p, l, Sides::Both, [](const Kernel& k) {
        const auto [A, B, C, D, E, F] = to_rism(raw_rism(k));
        const double num = sq(A * A + D * D) + sq(B * B + C * C) + sq(F * F + D * D) +
                           sq(E * E + C * C) - 4.0 - 2.0 * D * D * sq(A + F) - 2.0 * C * C * sq(E + B);
        const double den = sq(A - B) + sq(E - F) + 2.0 * sq(C + D);
        require_flux(den / 4.0);
        return num / (2.0 * den);
    });
    return r;
}

double noise_figure_from_stats(const PtParams& p, double l) {
    const PhotonNumberStats s = photon_number_stats(p, l);
    const MeanPhotonNumbers n = mean_photon_numbers(p, l);
    require_flux(n.ni + n.ns);
    return (s.var_ni + s.var_ns - 2.0 * s.covar) / (n.ni + n.ns);
}

double nf_excess(const PtParams& p, double l) { return noise_figure(p, l) - 1.0; }

}  // namespace qpt
