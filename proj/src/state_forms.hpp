#pragma once

// Closed-form output covariance and seeded means shared by the EPR and
// sensing code, generic over the kernel precision.
#include <array>
#include <cmath>
#include <complex>

#include "qpt/kernel.hpp"

namespace qpt::detail {

/// Var q_i(0), Var p_i(0), Var q_s(l), Var p_s(l), <q_i(0) p_s(l)>, <p_i(0) q_s(l)>.
template <class R>
std::array<std::complex<R>, 6> covariance_entries(const BasicKernel<R>& k) {
    using C = std::complex<R>;
    const C se2 = k.se * k.se, sb2 = k.sb * k.sb;
    const C u1 = k.sm * k.sm, u2 = k.sp * k.sp;
    const C v1 = k.em * k.em * se2 + sb2, v2 = k.ep * k.ep * se2 + sb2;
    const C xi = R(2) * k.se * k.sb * std::cosh(R(0.5) * k.g * k.l);
    const R four = 4;
    return {v1 / (four * u2), v2 / (four * u1), v1 / (four * u1), v2 / (four * u2), -xi / (four * u2),
            -xi / (four * u1)};
}

/// Unit-seed means of q_i(0), p_i(0), q_s(l), p_s(l).
template <class R>
std::array<std::complex<R>, 4> mean_entries(const BasicKernel<R>& k) {
    return {(k.em * k.se - k.sb) / k.sp, (k.sb - k.ep * k.se) / k.sm, (k.sb - k.em * k.se) / k.sm,
            (k.ep * k.se - k.sb) / k.sp};
}

}  // namespace qpt::detail
