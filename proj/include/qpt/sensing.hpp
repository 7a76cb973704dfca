#pragma once

#include <array>
#include <string_view>

#include <Eigen/Dense>

#include "qpt/core_params.hpp"

namespace qpt {

/// Coherent seed: every input quadrature mean equals alpha.
struct CoherentSeed {
    double alpha = 0.0;
};

enum class SensingObservable { Qi0, Pi0, Qsl, Psl, D1, D2 };

inline constexpr std::array<SensingObservable, 6> all_observables{
    SensingObservable::Qi0, SensingObservable::Pi0, SensingObservable::Qsl,
    SensingObservable::Psl, SensingObservable::D1,  SensingObservable::D2};

std::string_view to_string(SensingObservable obs);

struct SensingReport {
    double chi = 0.0;
    double variance = 0.25;
    double inv_var = 0.0;
    double qfi = 0.0;
    double ratio = 0.0;
};

/// Output means (q_i(0), p_i(0), q_s(l), p_s(l)).
struct MeanQuadratures {
    double qi0 = 0.0, pi0 = 0.0, qsl = 0.0, psl = 0.0;
};

MeanQuadratures mean_quadratures(const PtParams& p, double l, const CoherentSeed& seed);

/// d<obs>/d kappa at fixed g, l and alpha.
double susceptibility(const PtParams& p, double l, const CoherentSeed& seed, SensingObservable obs);

/// Variance of the observable for the seeded state (equal to the vacuum one).
double observable_variance(const PtParams& p, double l, SensingObservable obs);

/// chi^2 / variance.
double inverse_variance(const PtParams& p, double l, const CoherentSeed& seed, SensingObservable obs);

/// Closed-form quantum Fisher information for kappa, trace and alpha^2 terms.
double qfi_closed(const PtParams& p, double l, const CoherentSeed& seed);

/// Reduced form of qfi_closed at b = 1 as a function of kappa*l.
double qfi_ep(double kappa, double l, const CoherentSeed& seed);

struct QfiTerms {
    double trace = 0.0;
    double mean = 0.0;
    double total() const { return trace + mean; }
};

/// Output state in the sensing basis (q_i(0), q_s(l), p_i(0), p_s(l)).
struct SensingState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = 0.25 * Eigen::Matrix4d::Identity();
};

SensingState sensing_state(const PtParams& p, double l, const CoherentSeed& seed);

/// 1/2 Tr(V^-1 V' V^-1 V') + mu'^T V^-1 mu' with kappa-derivatives by
/// Richardson-refined central differences (h = 1e-6 kappa).
QfiTerms qfi_covariance_terms(const PtParams& p, double l, const CoherentSeed& seed);
double qfi_covariance(const PtParams& p, double l, const CoherentSeed& seed);

SensingReport crlb_report(const PtParams& p, double l, const CoherentSeed& seed, SensingObservable obs);

/// 4 n pi exp(-n g pi / beta) - beta / kappa; zero where the single-mode
/// sensitivity reaches its optimum at l = n pi / beta. Unbroken phase only.
double optimal_accuracy_residual(const PtParams& p, int n);

}  // namespace qpt
