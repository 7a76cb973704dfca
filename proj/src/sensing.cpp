#include "qpt/sensing.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qpt/epr.hpp"
#include "qpt/kernel.hpp"
#include "qpt/observables.hpp"
#include "qpt/oracle.hpp"
#include "state_forms.hpp"

namespace qpt {

using detail::Kernel;
using detail::Sides;

namespace {

// Unit-seed means in the order qi0, pi0, qsl, psl.
std::array<double, 4> raw_means(const Kernel& k) {
    const auto m = detail::mean_entries(k);
    return {realize(m[0]), realize(m[1]), realize(m[2]), realize(m[3])};
}

using LMat4 = Eigen::Matrix<long double, 4, 4>;
using LVec4 = Eigen::Matrix<long double, 4, 1>;

struct LongState {
    LMat4 cov;
    LVec4 mean;
};

// Sensing-basis state (q_i(0), q_s(l), p_i(0), p_s(l)) from the long-double kernel.
LongState long_state_raw(const detail::LongKernel& k, long double alpha) {
    const auto c = detail::covariance_entries(k);
    const auto m = detail::mean_entries(k);
    LongState s;
    s.cov.setZero();
    s.cov(0, 0) = c[0].real();
    s.cov(1, 1) = c[2].real();
    s.cov(2, 2) = c[1].real();
    s.cov(3, 3) = c[3].real();
    s.cov(0, 3) = s.cov(3, 0) = c[4].real();
    s.cov(2, 1) = s.cov(1, 2) = c[5].real();
    s.mean << alpha * m[0].real(), alpha * m[2].real(), alpha * m[1].real(), alpha * m[3].real();
    return s;
}

LongState long_state(const PtParams& p, double l, double alpha) {
    detail::require_regular(p, l, Sides::Both);
    if (p.phase != PtPhase::ExceptionalPoint) return long_state_raw(detail::make_long_kernel(p, l), alpha);
    auto at = [&](double sign) { return long_state_raw(detail::make_long_kernel(detail::nudged(p, sign), l), alpha); };
    const LongState lo = at(-1.0), hi = at(1.0), lo2 = at(-2.0), hi2 = at(2.0);
    LongState s;
    s.cov = (2.0L * (lo.cov + hi.cov) - 0.5L * (lo2.cov + hi2.cov)) / 3.0L;
    s.mean = (2.0L * (lo.mean + hi.mean) - 0.5L * (lo2.mean + hi2.mean)) / 3.0L;
    return s;
}

// Unit-seed susceptibilities in the order qi0, pi0, qsl, psl.
std::array<double, 4> raw_chi(const Kernel& k) {
    const double kl2 = 2.0 * k.kappa * k.l;
    const double gl = k.g * k.l;
    const cx bl = k.beta * k.l;
    const cx s_plus = std::sin(2.0 * bl + k.eps);
    const cx s_minus = std::sin(2.0 * bl - k.eps);
    auto active = [&](double e) {
        const cx num = e * k.sb * (kl2 + (2.0 - gl) * k.ce) - 2.0 * bl * e * k.ce * k.cb -
                       k.se * (kl2 + k.ce) + k.ce * s_plus;
        return realize(num / (2.0 * k.beta * k.sp * k.sp));
    };
    auto passive = [&](double e) {
        const cx num = 2.0 * bl * e * k.ce * k.cb - e * k.sb * ((2.0 + gl) * k.ce - kl2) +
                       k.se * (k.ce - kl2) + k.ce * s_minus;
        return realize(num / (2.0 * k.beta * k.sm * k.sm));
    };
    return {active(k.em), passive(k.ep), passive(k.em), active(k.ep)};
}

double raw_qfi(const Kernel& k, double alpha) {
    const double g2 = k.g * k.g, k2 = k.kappa * k.kappa;
    const double ch = std::cosh(k.g * k.l);
    const cx bl = k.beta * k.l;
    const cx x = g2 * k.sb - 4.0 * k2 * bl * k.cb;
    const cx y = std::sin(2.0 * bl) - 2.0 * bl;
    const cx gap = g2 - 4.0 * k2 * k.cb * k.cb;
    const cx den = k.beta * k.beta * gap * gap;
    const cx trace = 4.0 * ((ch + 1.0) * x * x + 2.0 * g2 * k2 * y * y) / den;
    const cx mean = 16.0 * alpha * alpha * (ch * x * x + g2 * k2 * y * y) / den;
    return realize(trace + mean);
}

double pick(const std::array<double, 4>& v, SensingObservable obs) {
    constexpr double r = std::numbers::sqrt2 / 2.0;
    switch (obs) {
        case SensingObservable::Qi0: return v[0];
        case SensingObservable::Pi0: return v[1];
        case SensingObservable::Qsl: return v[2];
        case SensingObservable::Psl: return v[3];
        case SensingObservable::D1: return r * (v[0] + v[2]);
        case SensingObservable::D2: return r * (v[1] + v[3]);
    }
    throw Error(ErrorCode::SpecError, "unknown sensing observable");
}

}  // namespace

std::string_view to_string(SensingObservable obs) {
    switch (obs) {
        case SensingObservable::Qi0: return "qi0";
        case SensingObservable::Pi0: return "pi0";
        case SensingObservable::Qsl: return "qsl";
        case SensingObservable::Psl: return "psl";
        case SensingObservable::D1: return "d1";
        case SensingObservable::D2: return "d2";
    }
    return "unknown";
}

MeanQuadratures mean_quadratures(const PtParams& p, double l, const CoherentSeed& seed) {
    detail::require_length(l);
    const double a = seed.alpha;
    if (l == 0.0) return {a, a, a, a};
    const auto m = detail::evaluate(p, l, Sides::Both, raw_means);
    return {a * m[0], a * m[1], a * m[2], a * m[3]};
}

double susceptibility(const PtParams& p, double l, const CoherentSeed& seed, SensingObservable obs) {
    detail::require_length(l);
    if (l == 0.0) return 0.0;
    return seed.alpha * pick(detail::evaluate(p, l, Sides::Both, raw_chi), obs);
}

double observable_variance(const PtParams& p, double l, SensingObservable obs) {
    switch (obs) {
        case SensingObservable::D1: return two_mode_variances(p, l).d1;
        case SensingObservable::D2: return two_mode_variances(p, l).d2;
        default: break;
    }
    const SingleModeVariances v = single_mode_variances(p, l);
    return pick({v.qi0, v.pi0, v.qsl, v.psl}, obs);
}

double inverse_variance(const PtParams& p, double l, const CoherentSeed& seed, SensingObservable obs) {
    const double chi = susceptibility(p, l, seed, obs);
    return chi * chi / observable_variance(p, l, obs);
}

double qfi_closed(const PtParams& p, double l, const CoherentSeed& seed) {
    detail::require_length(l);
    if (l == 0.0) return 0.0;
    return detail::evaluate(p, l, Sides::Both, [&seed](const Kernel& k) { return raw_qfi(k, seed.alpha); });
}

double qfi_ep(double kappa, double l, const CoherentSeed& seed) {
    detail::require_length(l);
    const double x = kappa * l;
    if (std::abs(x - 1.0) <= sing_tol) {
        throw Error(ErrorCode::SingularLength, "kappa*l = 1 at the exceptional point");
    }
    const double x2 = x * x;
    const double tail = (x2 - 3.0) * (x2 - 3.0) * std::cosh(2.0 * x);
    const double a2 = seed.alpha * seed.alpha;
    const double num = 4.0 * l * l * (9.0 * x2 * x2 - 6.0 * x2 + 9.0 + tail) +
                       16.0 * a2 * l * l * (4.0 * x2 * x2 + tail);
    return num / (9.0 * (x2 - 1.0) * (x2 - 1.0));
}

SensingState sensing_state(const PtParams& p, double l, const CoherentSeed& seed) {
    const Eigen::Matrix4d v = covariance_matrix(p, l).cov;
    const MeanQuadratures m = mean_quadratures(p, l, seed);
    // (q_i, p_i, q_s, p_s) -> (q_i, q_s, p_i, p_s)
    const std::array<int, 4> perm{0, 2, 1, 3};
    SensingState s;
    s.mean << m.qi0, m.qsl, m.pi0, m.psl;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) s.cov(r, c) = v(perm[r], perm[c]);
    }
    return s;
}

QfiTerms qfi_covariance_terms(const PtParams& p, double l, const CoherentSeed& seed) {
    detail::require_length(l);
    detail::require_regular(p, l, Sides::Both);
    if (l == 0.0) return {};
    // Long double throughout: V^-1 amplifies finite-difference noise in V'
    // along the squeezed direction.
    const LongState s = long_state(p, l, seed.alpha);
    Eigen::SelfAdjointEigenSolver<LMat4> es(s.cov, Eigen::EigenvaluesOnly);
    const long double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0L) || hi / lo > 1e12L) {
        throw Error(ErrorCode::IllConditioned, "output covariance is ill-conditioned");
    }
    auto at = [&](long double kappa) { return long_state(make_params(p.g, static_cast<double>(kappa)), l, seed.alpha); };
    // Central differences at h and h/2 with one Richardson step, h = 1e-6 kappa.
    const long double x = p.kappa, h = 1e-6L * p.kappa;
    auto diff = [&](long double step) {
        const LongState up = at(x + step), dn = at(x - step);
        return std::pair<LMat4, LVec4>{(up.cov - dn.cov) / (2.0L * step), (up.mean - dn.mean) / (2.0L * step)};
    };
    const auto [dv_h, dmu_h] = diff(h);
    const auto [dv_h2, dmu_h2] = diff(0.5L * h);
    const LMat4 dv = (4.0L * dv_h2 - dv_h) / 3.0L;
    const LVec4 dmu = (4.0L * dmu_h2 - dmu_h) / 3.0L;
    // A Cholesky solve; the 4x4 cofactor inverse squares the condition number.
    const Eigen::LLT<LMat4> llt(s.cov);
    const LMat4 t = llt.solve(dv);
    QfiTerms q;
    q.trace = static_cast<double>(0.5L * (t * t).trace());
    q.mean = static_cast<double>(dmu.dot(llt.solve(dmu)));
    return q;
}

double qfi_covariance(const PtParams& p, double l, const CoherentSeed& seed) {
    return qfi_covariance_terms(p, l, seed).total();
}

SensingReport crlb_report(const PtParams& p, double l, const CoherentSeed& seed, SensingObservable obs) {
    SensingReport r;
    r.chi = susceptibility(p, l, seed, obs);
    r.variance = observable_variance(p, l, obs);
    r.inv_var = r.chi * r.chi / r.variance;
    r.qfi = qfi_closed(p, l, seed);
    r.ratio = r.qfi > 0.0 ? r.inv_var / r.qfi : 0.0;
    return r;
}

double optimal_accuracy_residual(const PtParams& p, int n) {
    if (p.phase != PtPhase::Unbroken) {
        throw Error(ErrorCode::PhaseError, "optimal-accuracy condition needs the unbroken phase");
    }
    if (n < 1) throw Error(ErrorCode::SpecError, "n must be positive");
    const double beta = p.beta.real();
    const double pi = std::numbers::pi;
    return 4.0 * n * pi * std::exp(-n * p.g * pi / beta) - beta / p.kappa;
}

}  // namespace qpt
