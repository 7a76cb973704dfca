#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

#include "qpt/core_params.hpp"

namespace qpt {

// Threshold on |sin(beta l +- epsilon)| below which a length is singular.
inline constexpr double sing_tol = 1e-9;

namespace detail {

/// Complex trigonometric bundle shared by every closed form at (params, l).
template <class R>
struct BasicKernel {
    using C = std::complex<R>;
    R g = 0, kappa = 0, l = 0;
    C beta, eps;
    C sb, cb;  // sin(beta l), cos(beta l)
    C se, ce;  // sin(epsilon), cos(epsilon)
    C sp, sm;  // sin(beta l + epsilon), sin(beta l - epsilon)
    R ep = 1, em = 1;  // exp(+g l / 2), exp(-g l / 2)
};

using Kernel = BasicKernel<double>;
using LongKernel = BasicKernel<long double>;

/// Bundle formed in long double from g and kappa (branch taken from p).
LongKernel make_long_kernel(const PtParams& p, double l);

/// make_long_kernel rounded to double.
Kernel make_kernel(const PtParams& p, double l);

enum class Sides { Active, Passive, Both };

/// Throws SingularLength when the relevant boundary denominator vanishes.
void require_regular(const PtParams& p, double l, Sides sides);

void require_length(double l);

/// Parameters at b = 1 + sign * ep_nudge.
PtParams nudged(const PtParams& p, double sign);

// Symmetric averages at nudges h and 2h combined as (4 avg_h - avg_2h) / 3,
// cancelling the O(h^2) term of the plain average.
inline double richardson(double lo, double hi, double lo2, double hi2) {
    return (2.0 * (lo + hi) - 0.5 * (lo2 + hi2)) / 3.0;
}

template <std::size_t N>
std::array<double, N> richardson(const std::array<double, N>& lo, const std::array<double, N>& hi,
                                 const std::array<double, N>& lo2, const std::array<double, N>& hi2) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = richardson(lo[i], hi[i], lo2[i], hi2[i]);
    return r;
}

/// Evaluate raw(kernel) with the singular-length guard, or by the Richardson
/// step over nudged neighbours when the parameters sit inside the EP band.
template <class F>
auto evaluate(const PtParams& p, double l, Sides sides, F&& raw) {
    require_length(l);
    require_regular(p, l, sides);
    if (p.phase == PtPhase::ExceptionalPoint) {
        return richardson(raw(make_kernel(nudged(p, -1.0), l)), raw(make_kernel(nudged(p, +1.0), l)),
                          raw(make_kernel(nudged(p, -2.0), l)), raw(make_kernel(nudged(p, +2.0), l)));
    }
    return raw(make_kernel(p, l));
}

}  // namespace detail
}  // namespace qpt
