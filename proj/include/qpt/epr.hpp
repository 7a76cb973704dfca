#pragma once

#include <Eigen/Dense>

#include "qpt/core_params.hpp"

namespace qpt {

/// Local-oscillator angles: theta on the idler, lo_phase_s on the signal.
struct EprAngles {
    double theta = 0.0;
    double lo_phase_s = 0.0;
};

struct EprSums {
    double x1_minus_y1 = 0.5;
    double x2_plus_y2 = 0.5;
    double x1_plus_y1 = 0.5;
    double x2_minus_y2 = 0.5;
};

struct EprResult {
    double et1 = 1.0;
    double et2 = 1.0;
    bool strong1 = false, weak1 = false;
    bool strong2 = false, weak2 = false;
};

struct EprOptimal {
    double value = 1.0;
    double lower_bound = 1.0;
};

/// Output mean and covariance over (q_i(0), p_i(0), q_s(l), p_s(l)).
struct QuadCovariance {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = 0.25 * Eigen::Matrix4d::Identity();
};

EprSums epr_sum_variances(const PtParams& p, double l, const EprAngles& angles);
EprResult epr_criteria(const PtParams& p, double l, const EprAngles& angles);

/// Closed exceptional-point forms of ET1 and ET2 (b = 1 exactly).
EprResult epr_criteria_at_ep(double kappa, double l, const EprAngles& angles);

/// ET1 at theta + phi = 3 pi/2 and its Cauchy-Schwarz lower bound.
EprOptimal epr_optimal(const PtParams& p, double l);

/// (e^{gl/2} s_eps - s_bl) sin(bl+eps) - (e^{-gl/2} s_eps - s_bl) sin(bl-eps);
/// the optimal value meets its lower bound where this vanishes.
double epr_equality_residual(const PtParams& p, double l);

QuadCovariance covariance_matrix(const PtParams& p, double l);

/// eta = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2) from a covariance matrix.
double eta_from_covariance(const Eigen::Matrix4d& cov);

/// eta along the covariance path, EP band included.
double eta_covariance(const PtParams& p, double l);

/// Closed-form eta (rationalized to avoid cancellation).
double eta_closed(const PtParams& p, double l);

/// Closed-form eta at the exceptional point as a function of kappa*l.
double eta_ep(double kappa, double l);

double log_negativity(const PtParams& p, double l);

}  // namespace qpt
