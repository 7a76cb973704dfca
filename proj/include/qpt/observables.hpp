#pragma once

#include "qpt/core_params.hpp"

namespace qpt {

/// Output quadrature variances for vacuum input (vacuum = 1/4).
struct SingleModeVariances {
    double qi0 = 0.25;
    double psl = 0.25;
    double qsl = 0.25;
    double pi0 = 0.25;
};

struct TwoModeVariances {
    double d1 = 0.25;
    double d2 = 0.25;
};

/// Coefficients of a_i(0) and a_s(l) in terms of the input quadratures.
struct RismCoefficients {
    double A = 1.0, B = 1.0, C = 0.0, D = 0.0, E = 1.0, F = 1.0;
};

struct PhotonNumberStats {
    double var_ni = 0.0;
    double var_ns = 0.0;
    double covar = 0.0;
};

struct MeanPhotonNumbers {
    double ni = 0.0;
    double ns = 0.0;
};

enum class PumpPhase { Zero, HalfPi };

SingleModeVariances single_mode_variances(const PtParams& p, double l);
TwoModeVariances two_mode_variances(const PtParams& p, double l);

/// |C_jm| between X_j(0) (idler) and Y_m(l) (signal) for j, m in {1, 2}.
double correlation_coefficient(const PtParams& p, double l, int j, int m, PumpPhase phase);

/// C_21 through the product-form normalization; equals C_12 analytically.
double correlation_coefficient_21_product_form(const PtParams& p, double l);

RismCoefficients rism_coefficients(const PtParams& p, double l);
PhotonNumberStats photon_number_stats(const PtParams& p, double l);
MeanPhotonNumbers mean_photon_numbers(const PtParams& p, double l);

/// Var[N_i - N_s] / (<N_i> + <N_s>) via the closed RISM formula.
double noise_figure(const PtParams& p, double l);

/// Same ratio assembled from photon_number_stats and mean_photon_numbers.
double noise_figure_from_stats(const PtParams& p, double l);

/// Shot-noise-referenced NF - 1: negative values mark relative-intensity squeezing.
double nf_excess(const PtParams& p, double l);

}  // namespace qpt
