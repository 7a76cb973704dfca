#pragma once

#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "qpt/core_params.hpp"
#include "qpt/propagator.hpp"

// Brute-force validators. Nothing in here uses the closed-form solutions.
namespace qpt::oracle {

enum class Derivation { MatrixExponential, OdeIntegration };

struct BoundaryMap {
    Eigen::Matrix2d m;
    Derivation derivation = Derivation::MatrixExponential;
};

/// exp(G l) by the closed 2x2 formula, with a series for coincident eigenvalues.
Eigen::Matrix2d expm2(const Eigen::Matrix2d& G, double l);

/// exp(G l) by Eigen's scaling-and-squaring Pade approximant.
Eigen::Matrix2d expm_pade(const Eigen::Matrix2d& G, double l);

/// exp(G l) by classical RK4 with a fixed number of steps.
Eigen::Matrix2d propagate_rk4(const Eigen::Matrix2d& G, double l, int steps = 10000);

/// Solve the forward map for (x1(0), x2(l)) in terms of (x1(l), x2(0)).
/// det, when given, is the exact determinant of the forward map.
BoundaryMap rearrange(const Eigen::Matrix2d& forward, Derivation d,
                      double det = std::numeric_limits<double>::quiet_NaN());

BoundaryMap oracle_boundary_map(const Eigen::Matrix2d& generator, double l,
                                Derivation d = Derivation::MatrixExponential);

Eigen::Matrix2d to_eigen(const Mat2& m);

/// Gaussian output state over (q_i(0), p_i(0), q_s(l), p_s(l)).
struct GaussianState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = 0.25 * Eigen::Matrix4d::Identity();
};

/// Propagate vacuum (or a coherent seed of amplitude alpha on every input
/// quadrature) through the two boundary maps of the chosen pump phase.
GaussianState oracle_output_covariance(const PtParams& p, double l, double alpha = 0.0,
                                       bool pump_phase_90 = false);

struct PhotonMoments {
    double var_ni = 0.0;
    double var_ns = 0.0;
    double covar = 0.0;
    double mean_ni = 0.0;
    double mean_ns = 0.0;
};

/// Photon-number statistics of a Gaussian state via Isserlis/Wick expansion.
PhotonMoments oracle_photon_moments(const Eigen::Matrix4d& cov, const Eigen::Vector4d& mean);

/// Richardson-extrapolated central difference (4 D(h/2) - D(h)) / 3.
double finite_difference(const std::function<double(double)>& f, double x, double h);

template <class F>
auto finite_difference_vec(F&& f, double x, double h) {
    auto d = [&](double s) { return ((f(x + s) - f(x - s)) / (2.0 * s)).eval(); };
    return ((4.0 * d(0.5 * h) - d(h)) / 3.0).eval();
}

}  // namespace qpt::oracle
