#include "qpt/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace qpt {
namespace detail {

LongKernel make_long_kernel(const PtParams& p, double l) {
    // Near a singular length sin(beta l +- eps) is small and the rounding of
    // its argument dominates, so the bundle is formed from g and kappa here.
    using ld = long double;
    using lcx = std::complex<ld>;
    const ld kap = p.kappa;
    const ld b = ld(p.g) / (2.0L * kap);
    lcx beta, eps;
    if (b <= 1.0L) {
        beta = lcx(kap * std::sqrt((1.0L - b) * (1.0L + b)), 0.0L);
        eps = lcx(std::acos(b), 0.0L);
    } else {
        beta = lcx(0.0L, kap * std::sqrt((b - 1.0L) * (b + 1.0L)));
        eps = lcx(0.0L, std::acosh(b));
    }
    if (p.beta.real() < 0.0 || p.beta.imag() < 0.0) {  // conjugate branch
        beta = -beta;
        eps = -eps;
    }
    LongKernel k;
    k.g = p.g;
    k.kappa = kap;
    k.l = l;
    k.beta = beta;
    k.eps = eps;
    const lcx bl = beta * ld(l);
    k.sb = std::sin(bl);
    k.cb = std::cos(bl);
    k.se = std::sin(eps);
    k.ce = std::cos(eps);
    k.sp = std::sin(bl + eps);
    k.sm = std::sin(bl - eps);
    k.ep = std::exp(0.5L * p.g * l);
    k.em = std::exp(-0.5L * p.g * l);
    return k;
}

Kernel make_kernel(const PtParams& p, double l) {
    const LongKernel w = make_long_kernel(p, l);
    auto round = [](std::complex<long double> z) {
        return cx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    };
    Kernel k;
    k.g = p.g;
    k.kappa = p.kappa;
    k.l = l;
    k.beta = p.beta;
    k.eps = p.epsilon;
    k.sb = round(w.sb);
    k.cb = round(w.cb);
    k.se = round(w.se);
    k.ce = round(w.ce);
    k.sp = round(w.sp);
    k.sm = round(w.sm);
    k.ep = static_cast<double>(w.ep);
    k.em = static_cast<double>(w.em);
    return k;
}

void require_length(double l) {
    if (!std::isfinite(l)) throw Error(ErrorCode::NonFinite, "length must be finite");
    if (l < 0.0) throw Error(ErrorCode::SpecError, "length must be non-negative");
}

void require_regular(const PtParams& p, double l, Sides sides) {
    const bool active = sides != Sides::Passive;
    const bool passive = sides != Sides::Active;
    if (p.phase == PtPhase::ExceptionalPoint) {
        // sin(bl -+ eps)/sin(eps) -> kappa l -+ 1 as b -> 1.
        if (passive && std::abs(p.kappa * l - 1.0) <= sing_tol) {
            throw Error(ErrorCode::SingularLength, "kappa*l = 1 at the exceptional point");
        }
        return;
    }
    const cx bl = p.beta * l;
    if (active && std::abs(std::sin(bl + p.epsilon)) <= sing_tol) {
        throw Error(ErrorCode::SingularLength, "sin(beta l + epsilon) vanishes");
    }
    if (passive && std::abs(std::sin(bl - p.epsilon)) <= sing_tol) {
        throw Error(ErrorCode::SingularLength, "sin(beta l - epsilon) vanishes");
    }
}

PtParams nudged(const PtParams& p, double sign) {
    return make_params(2.0 * p.kappa * (1.0 + sign * ep_nudge), p.kappa);
}

}  // namespace detail

bool is_active(QuadPair pair) {
    return pair == QuadPair::QiPs || pair == QuadPair::QiQs_phi90;
}

std::string_view to_string(QuadPair pair) {
    switch (pair) {
        case QuadPair::QiPs: return "QiPs";
        case QuadPair::PiQs: return "PiQs";
        case QuadPair::QiQs_phi90: return "QiQs_phi90";
        case QuadPair::PiPs_phi90: return "PiPs_phi90";
    }
    return "Unknown";
}

Mat2 forward_generator(const PtParams& p, QuadPair pair) {
    const double g = p.g, k = p.kappa;
    switch (pair) {
        case QuadPair::QiPs:
        case QuadPair::QiQs_phi90: return {{{g, k}, {-k, 0.0}}};
        case QuadPair::PiQs: return {{{-g, k}, {-k, 0.0}}};
        case QuadPair::PiPs_phi90: return {{{-g, -k}, {k, 0.0}}};
    }
    return {};
}

CMat2 effective_hamiltonian(const PtParams& p, QuadPair pair) {
    const Mat2 G = forward_generator(p, pair);
    const cx i(0.0, 1.0);
    const cx shift = (is_active(pair) ? 1.0 : -1.0) * i * (0.5 * p.g);
    CMat2 h{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) h[r][c] = i * G[r][c] - (r == c ? shift : cx(0.0));
    }
    return h;
}

namespace {

template <class R>
std::array<std::complex<R>, 4> transfer_entries(const detail::BasicKernel<R>& k, QuadPair pair) {
    std::complex<R> m11, m12, m21, m22;
    switch (pair) {
        case QuadPair::QiPs:
        case QuadPair::QiQs_phi90:
            m11 = k.em * k.se / k.sp;
            m12 = -k.sb / k.sp;
            m21 = m12;
            m22 = k.ep * k.se / k.sp;
            break;
        case QuadPair::PiQs:
            m11 = -k.ep * k.se / k.sm;
            m12 = k.sb / k.sm;
            m21 = m12;
            m22 = -k.em * k.se / k.sm;
            break;
        case QuadPair::PiPs_phi90:
            m11 = -k.ep * k.se / k.sm;
            m12 = -k.sb / k.sm;
            m21 = m12;
            m22 = -k.em * k.se / k.sm;
            break;
    }
    return {m11, m12, m21, m22};
}

std::array<double, 4> raw_transfer(const detail::Kernel& k, QuadPair pair) {
    const auto m = transfer_entries(k, pair);
    return {realize(m[0]), realize(m[1]), realize(m[2]), realize(m[3])};
}

detail::Sides sides_of(QuadPair pair) {
    return is_active(pair) ? detail::Sides::Active : detail::Sides::Passive;
}

}  // namespace

TransferMatrix2 transfer(const PtParams& p, double l, QuadPair pair) {
    TransferMatrix2 t;
    t.pair = pair;
    t.l = l;
    detail::require_length(l);
    if (l == 0.0) return t;
    const auto m = detail::evaluate(p, l, sides_of(pair),
                                    [pair](const detail::Kernel& k) { return raw_transfer(k, pair); });
    t.m11 = m[0];
    t.m12 = m[1];
    t.m21 = m[2];
    t.m22 = m[3];
    return t;
}

double transfer_det_closed(const PtParams& p, double l, QuadPair pair) {
    return detail::evaluate(p, l, sides_of(pair), [pair](const detail::Kernel& k) {
        const cx ratio = std::sin(k.eps - k.beta * k.l) / std::sin(k.eps + k.beta * k.l);
        return realize(is_active(pair) ? ratio : 1.0 / ratio);
    });
}

namespace {

// The four weighted sums, each of which must equal 1.
template <class R>
std::array<R, 4> commutator_sums(const detail::BasicKernel<R>& k) {
    using std::real;
    // Pump phase 0: q_i(0) and p_s(l) come from QiPs, p_i(0) and q_s(l) from PiQs.
    const auto a = transfer_entries(k, QuadPair::QiPs);
    const auto b = transfer_entries(k, QuadPair::PiQs);
    // [q_i(0), p_i(0)] = a11 b11 [q_i,p_i] + a12 b12 [p_s,q_s] at the inputs.
    const R qi_pi = real(a[0] * b[0] - a[1] * b[1]);
    // [q_s(l), p_s(l)] = b21 a21 [p_i,q_i] + b22 a22 [q_s,p_s].
    const R qs_ps = real(b[3] * a[3] - b[2] * a[2]);
    // Pump phase pi/2: q's from QiQs_phi90, p's from PiPs_phi90.
    const auto c = transfer_entries(k, QuadPair::QiQs_phi90);
    const auto d = transfer_entries(k, QuadPair::PiPs_phi90);
    const R qi_pi_90 = real(c[0] * d[0] + c[1] * d[1]);
    const R qs_ps_90 = real(c[2] * d[2] + c[3] * d[3]);
    return {qi_pi, qs_ps, qi_pi_90, qs_ps_90};
}

}  // namespace

double check_commutators(const PtParams& p, double l) {
    detail::require_length(l);
    detail::require_regular(p, l, detail::Sides::Both);
    if (l == 0.0) return 0.0;
    // Products of entries near 1/sin^2 cancel to 1, so the sums are formed in
    // long double from the long-double sine bundle.
    std::array<long double, 4> s;
    if (p.phase == PtPhase::ExceptionalPoint) {
        auto at = [&](double sign) { return commutator_sums(detail::make_long_kernel(detail::nudged(p, sign), l)); };
        const auto lo = at(-1.0), hi = at(1.0), lo2 = at(-2.0), hi2 = at(2.0);
        for (int i = 0; i < 4; ++i) s[i] = (2.0L * (lo[i] + hi[i]) - 0.5L * (lo2[i] + hi2[i])) / 3.0L;
    } else {
        s = commutator_sums(detail::make_long_kernel(p, l));
    }
    long double worst = 0.0L;
    for (long double v : s) worst = std::max(worst, std::abs(v - 1.0L));
    return static_cast<double>(worst);
}

}  // namespace qpt
