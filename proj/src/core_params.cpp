#include "qpt/core_params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qpt {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::PhaseError: return "PhaseError";
        case ErrorCode::SingularLength: return "SingularLength";
        case ErrorCode::InternalConsistency: return "InternalConsistency";
        case ErrorCode::DegenerateFlux: return "DegenerateFlux";
        case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::SingularRearrangement: return "SingularRearrangement";
        case ErrorCode::NotGaussianValid: return "NotGaussianValid";
        case ErrorCode::SpecError: return "SpecError";
        case ErrorCode::UnknownFigure: return "UnknownFigure";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

std::string_view to_string(PtPhase phase) {
    switch (phase) {
        case PtPhase::Unbroken: return "Unbroken";
        case PtPhase::ExceptionalPoint: return "ExceptionalPoint";
        case PtPhase::Broken: return "Broken";
    }
    return "Unknown";
}

PtParams make_params(double g, double kappa) {
    if (!std::isfinite(g) || !std::isfinite(kappa)) {
        throw Error(ErrorCode::NonFinite, "g and kappa must be finite");
    }
    if (kappa <= 0.0) {
        throw Error(ErrorCode::NonPositiveKappa, "kappa must be positive");
    }
    if (g < 0.0) {
        throw Error(ErrorCode::SpecError, "g must be non-negative");
    }
    PtParams p;
    p.g = g;
    p.kappa = kappa;
    p.b = g / (2.0 * kappa);
    const double b = p.b;
    if (b <= 1.0) {
        // (1-b)(1+b) keeps the digits near the EP that 1-b*b would lose.
        p.beta = cx(kappa * std::sqrt((1.0 - b) * (1.0 + b)), 0.0);
        p.epsilon = cx(std::acos(b), 0.0);
    } else {
        p.beta = cx(0.0, kappa * std::sqrt((b - 1.0) * (b + 1.0)));
        p.epsilon = cx(0.0, std::acosh(b));
    }
    if (std::abs(b - 1.0) <= ep_tol) {
        p.phase = PtPhase::ExceptionalPoint;
    } else if (b < 1.0) {
        p.phase = PtPhase::Unbroken;
    } else {
        p.phase = PtPhase::Broken;
    }
    return p;
}

PtParams params_from_b(double b, double kappa) {
    return make_params(2.0 * kappa * b, kappa);
}

PtParams with_conjugate_branch(const PtParams& p) {
    PtParams q = p;
    q.beta = -p.beta;
    q.epsilon = -p.epsilon;
    return q;
}

double period_T(const PtParams& p) {
    if (p.phase != PtPhase::Unbroken) {
        throw Error(ErrorCode::PhaseError, "period is defined only in the unbroken phase");
    }
    return 2.0 * std::numbers::pi * p.kappa / p.beta.real();
}

double realize(cx z) {
    if (std::isnan(z.real()) || std::isnan(z.imag())) {
        throw Error(ErrorCode::NonFinite, "NaN in complex intermediate");
    }
    if (std::abs(z.imag()) > real_tol * (1.0 + std::abs(z.real()))) {
        std::ostringstream os;
        os << "expected a real value, got (" << z.real() << ", " << z.imag() << ")";
        throw Error(ErrorCode::InternalConsistency, os.str());
    }
    return z.real();
}

}  // namespace qpt
