#pragma once

#include <array>
#include <complex>
#include <string_view>

#include "qpt/core_params.hpp"
#include "qpt/kernel.hpp"

namespace qpt {

/// Conjugate quadrature pairs. QiPs and PiQs belong to pump phase 0, the
/// *_phi90 pairs to pump phase pi/2.
enum class QuadPair { QiPs, PiQs, QiQs_phi90, PiPs_phi90 };

inline constexpr std::array<QuadPair, 4> all_pairs{
    QuadPair::QiPs, QuadPair::PiQs, QuadPair::QiQs_phi90, QuadPair::PiPs_phi90};

bool is_active(QuadPair pair);
std::string_view to_string(QuadPair pair);

using Mat2 = std::array<std::array<double, 2>, 2>;
using CMat2 = std::array<std::array<cx, 2>, 2>;

/// Boundary-value map (idler at 0, signal at l) <- (idler at l, signal at 0).
struct TransferMatrix2 {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    QuadPair pair = QuadPair::QiPs;
    double l = 0.0;

    double det() const { return m11 * m22 - m12 * m21; }
    Mat2 matrix() const { return {{{m11, m12}, {m21, m22}}}; }
};

/// d/dz (idler, signal) = G (idler, signal) for the given pair.
Mat2 forward_generator(const PtParams& p, QuadPair pair);

/// Traceless effective Hamiltonian: i*G minus its +-i(g/2) identity part.
CMat2 effective_hamiltonian(const PtParams& p, QuadPair pair);

TransferMatrix2 transfer(const PtParams& p, double l, QuadPair pair);

/// Complex closed-form determinant: sin(eps - bl)/sin(eps + bl) for active
/// pairs, the reciprocal for passive ones.
double transfer_det_closed(const PtParams& p, double l, QuadPair pair);

/// Max over both pump phases and both modes of |weighted sum - 1|, where the
/// weighted sum is [x(0), y(0)] / (i/2) built from the transfer entries.
double check_commutators(const PtParams& p, double l);

}  // namespace qpt
