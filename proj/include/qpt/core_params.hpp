#pragma once

#include <complex>

#include "qpt/error.hpp"

namespace qpt {

using cx = std::complex<double>;

// Half-width of the exceptional-point band on |b - 1|.
inline constexpr double ep_tol = 1e-6;
// Offset in b used to evaluate inside the EP band (average of 1 - d and 1 + d).
inline constexpr double ep_nudge = 1e-5;
// A complex intermediate is accepted as real when |Im| <= real_tol * (1 + |Re|).
inline constexpr double real_tol = 1e-9;

enum class PtPhase { Unbroken, ExceptionalPoint, Broken };

/// System constants and the derived PT quantities.
///
/// beta = kappa*sqrt(1 - b^2) on the principal branch (positive real below the
/// EP, positive imaginary above it); epsilon satisfies cos(epsilon) = b and
/// sin(epsilon) = beta/kappa.
struct PtParams {
    double g = 0.0;
    double kappa = 1.0;
    double b = 0.0;
    cx beta;
    cx epsilon;
    PtPhase phase = PtPhase::Unbroken;
};

PtParams make_params(double g, double kappa);

/// Convenience: parameters from the ratio b = g/(2 kappa).
PtParams params_from_b(double b, double kappa);

/// Same (g, kappa) with the opposite root: (beta, epsilon) -> (-beta, -epsilon).
PtParams with_conjugate_branch(const PtParams& p);

/// Oscillation period 2*pi*kappa/beta in units of 2*kappa*l. Unbroken phase only.
double period_T(const PtParams& p);

/// Realize a complex intermediate, throwing InternalConsistency if it is not real.
double realize(cx z);

std::string_view to_string(PtPhase phase);

}  // namespace qpt
