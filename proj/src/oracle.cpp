#include "qpt/oracle.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qpt::oracle {

Eigen::Matrix2d to_eigen(const Mat2& m) {
    Eigen::Matrix2d r;
    r << m[0][0], m[0][1], m[1][0], m[1][1];
    return r;
}

Eigen::Matrix2d expm2(const Eigen::Matrix2d& G, double l) {
    // exp(A) = e^t [cosh(mu) I + sinh(mu)/mu (A - t I)], t = tr/2, mu^2 = t^2 - det,
    // in long double so the rearrangement pivot keeps its digits near zero.
    using ld = long double;
    const ld a = ld(G(0, 0)) * l, b = ld(G(0, 1)) * l, c = ld(G(1, 0)) * l, d = ld(G(1, 1)) * l;
    const ld t = 0.5L * (a + d);
    const ld mu2 = 0.25L * (a - d) * (a - d) + b * c;
    ld ch, sh;  // cosh(mu), sinh(mu)/mu, both real
    if (std::abs(mu2) < 1e-16L) {
        ch = 1.0L + mu2 / 2.0L + mu2 * mu2 / 24.0L;
        sh = 1.0L + mu2 / 6.0L + mu2 * mu2 / 120.0L;
    } else if (mu2 > 0.0L) {
        const ld mu = std::sqrt(mu2);
        ch = std::cosh(mu);
        sh = std::sinh(mu) / mu;
    } else {
        const ld w = std::sqrt(-mu2);
        ch = std::cos(w);
        sh = std::sin(w) / w;
    }
    const ld e = std::exp(t);
    Eigen::Matrix2d r;
    r << static_cast<double>(e * (ch + sh * (a - t))), static_cast<double>(e * sh * b),
        static_cast<double>(e * sh * c), static_cast<double>(e * (ch + sh * (d - t)));
    return r;
}

Eigen::Matrix2d expm_pade(const Eigen::Matrix2d& G, double l) {
    const Eigen::Matrix2d A = G * l;
    return A.exp();
}

Eigen::Matrix2d propagate_rk4(const Eigen::Matrix2d& G, double l, int steps) {
    Eigen::Matrix2d X = Eigen::Matrix2d::Identity();
    const double h = l / steps;
    for (int i = 0; i < steps; ++i) {
        const Eigen::Matrix2d k1 = G * X;
        const Eigen::Matrix2d k2 = G * (X + 0.5 * h * k1);
        const Eigen::Matrix2d k3 = G * (X + 0.5 * h * k2);
        const Eigen::Matrix2d k4 = G * (X + h * k3);
        X += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return X;
}

BoundaryMap rearrange(const Eigen::Matrix2d& F, Derivation d, double det) {
    // x1(l) = F11 x1(0) + F12 x2(0); x2(l) = F21 x1(0) + F22 x2(0).
    const double pivot = F(0, 0);
    if (std::abs(pivot) <= 1e-12) {
        throw Error(ErrorCode::SingularRearrangement, "pivot of the forward map vanishes");
    }
    BoundaryMap b;
    b.derivation = d;
    b.m(0, 0) = 1.0 / pivot;
    b.m(0, 1) = -F(0, 1) / pivot;
    b.m(1, 0) = F(1, 0) / pivot;
    // Schur complement F22 - F21 F12 / F11 = det F / F11; the determinant form
    // avoids cancelling two e^{gl}-sized terms when det is supplied.
    b.m(1, 1) = std::isnan(det) ? F(1, 1) - F(1, 0) * F(0, 1) / pivot : det / pivot;
    return b;
}

BoundaryMap oracle_boundary_map(const Eigen::Matrix2d& generator, double l, Derivation d) {
    if (!std::isfinite(l)) throw Error(ErrorCode::NonFinite, "length must be finite");
    if (l < 0.0) throw Error(ErrorCode::SpecError, "length must be non-negative");
    const Eigen::Matrix2d F =
        d == Derivation::MatrixExponential ? expm2(generator, l) : propagate_rk4(generator, l);
    // Jacobi: det exp(G l) = exp(l tr G).
    return rearrange(F, d, std::exp(l * generator.trace()));
}

GaussianState oracle_output_covariance(const PtParams& p, double l, double alpha, bool pump_phase_90) {
    // Index order of the output state: q_i(0)=0, p_i(0)=1, q_s(l)=2, p_s(l)=3.
    struct PairSlots {
        QuadPair pair;
        int idler, signal;
    };
    const PairSlots first = pump_phase_90 ? PairSlots{QuadPair::QiQs_phi90, 0, 2}
                                          : PairSlots{QuadPair::QiPs, 0, 3};
    const PairSlots second = pump_phase_90 ? PairSlots{QuadPair::PiPs_phi90, 1, 3}
                                           : PairSlots{QuadPair::PiQs, 1, 2};
    GaussianState s;
    s.cov.setZero();
    for (const PairSlots& ps : {first, second}) {
        const BoundaryMap m = oracle_boundary_map(to_eigen(forward_generator(p, ps.pair)), l);
        const Eigen::Matrix2d c = 0.25 * m.m * m.m.transpose();
        const Eigen::Vector2d mu = m.m * Eigen::Vector2d(alpha, alpha);
        const int idx[2] = {ps.idler, ps.signal};
        for (int r = 0; r < 2; ++r) {
            s.mean(idx[r]) = mu(r);
            for (int c2 = 0; c2 < 2; ++c2) s.cov(idx[r], idx[c2]) = c(r, c2);
        }
    }
    return s;
}

PhotonMoments oracle_photon_moments(const Eigen::Matrix4d& cov, const Eigen::Vector4d& mean) {
    using cd = std::complex<double>;
    // Ordered two-point function <dx_a dx_b> = V_ab + [x_a, x_b]/2 with [q,p] = i/2.
    Eigen::Matrix4cd G = cov.cast<cd>();
    for (int j : {0, 2}) {
        G(j, j + 1) += cd(0.0, 0.25);
        G(j + 1, j) -= cd(0.0, 0.25);
    }
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(G, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
        throw Error(ErrorCode::NotGaussianValid, "covariance violates the uncertainty relation");
    }

    auto m2 = [&](int a, int b) { return mean(a) * mean(b) + G(a, b); };
    auto m4 = [&](int a, int b, int c, int d) {
        const int idx[4] = {a, b, c, d};
        cd s = mean(a) * mean(b) * mean(c) * mean(d);
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                double rest = 1.0;
                for (int k = 0; k < 4; ++k) {
                    if (k != i && k != j) rest *= mean(idx[k]);
                }
                s += G(idx[i], idx[j]) * rest;
            }
        }
        s += G(a, b) * G(c, d) + G(a, c) * G(b, d) + G(a, d) * G(b, c);
        return s;
    };
    // N = q^2 + p^2 - 1/2 for each mode.
    auto n1 = [&](int q) { return m2(q, q) + m2(q + 1, q + 1) - 0.5; };
    auto n2 = [&](int q1, int q2) {
        cd s = 0.0;
        for (int a : {q1, q1 + 1}) {
            for (int b : {q2, q2 + 1}) s += m4(a, a, b, b);
        }
        return s - 0.5 * (n1(q1) + n1(q2)) - 0.25;
    };
    const cd ni = n1(0), ns = n1(2);
    PhotonMoments r;
    r.mean_ni = ni.real();
    r.mean_ns = ns.real();
    r.var_ni = (n2(0, 0) - ni * ni).real();
    r.var_ns = (n2(2, 2) - ns * ns).real();
    r.covar = (n2(0, 2) - ni * ns).real();
    return r;
}

double finite_difference(const std::function<double(double)>& f, double x, double h) {
    auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

}  // namespace qpt::oracle
