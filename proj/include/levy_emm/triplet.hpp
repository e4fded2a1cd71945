#pragma once

#include "levy_emm/extended_real.hpp"
#include "levy_emm/levy_measure.hpp"
#include "levy_emm/quadrature.hpp"

namespace levy_emm {

/// Characteristic triplet (b, sigma^2, nu); b is relative to h(x) = x 1{|x|<=1}.
struct LevyTriplet {
    double b = 0.0;
    double sigma2 = 0.0;
    LevyMeasure nu;
};

/// A triplet that passed validation, with cached facts about ν.
class ValidatedTriplet {
public:
    const LevyTriplet& triplet() const { return triplet_; }
    /// ∫_{|x|<=1} x^2 ν(dx)
    double small_jump_variation() const { return small_jump_variation_; }
    /// ν({|x| > 1})
    double large_jump_mass() const { return large_jump_mass_; }

private:
    friend ValidatedTriplet validate_triplet(const LevyTriplet&, const QuadratureSettings&);
    LevyTriplet triplet_;
    double small_jump_variation_ = 0.0;
    double large_jump_mass_ = 0.0;
};

/// Throws NegativeVariance or NonIntegrableLevyMeasure.
ValidatedTriplet validate_triplet(const LevyTriplet& t, const QuadratureSettings& q = {});

/// c(k) = b k + sigma^2 k^2/2 + ∫ (e^{kx} - 1 - k h(x)) ν(dx); +inf outside I.
ExtendedReal cumulant(const LevyTriplet& t, double kappa, const QuadratureSettings& q = {});

/// m(k) = c'(k) = b + sigma^2 k + ∫ (x e^{kx} - h(x)) ν(dx), with the one-sided
/// conventions: +inf if only the right tail diverges, -inf if only the left.
/// Throws PsiUndefined if both diverge.
ExtendedReal cumulant_derivative(const LevyTriplet& t, double kappa, const QuadratureSettings& q = {});

/// c''(k) = sigma^2 + ∫ x^2 e^{kx} ν(dx)
ExtendedReal cumulant_second_derivative(const LevyTriplet& t, double kappa, const QuadratureSettings& q = {});

/// phi_T(k) = E[exp(k L_T)] = exp(T c(k)).
ExtendedReal mgf(const LevyTriplet& t, double T, double kappa, const QuadratureSettings& q = {});

/// psi_T(k) = E[L_T exp(k L_T)] = phi_T(k) T m(k).
ExtendedReal mgf_derivative(const LevyTriplet& t, double T, double kappa, const QuadratureSettings& q = {});

enum class Monotonicity { IncreasingSubordinator, DecreasingSubordinator, NotMonotone };

const char* to_string(Monotonicity m);

/// Sample paths of L are monotone iff there is no Gaussian part, jumps have
/// one sign with finite variation near 0, and the drift net of small-jump
/// compensation points the same way.
Monotonicity is_monotone(const LevyTriplet& t, const QuadratureSettings& q = {});

/// Triplet of the stochastic logarithm L of S = S0 exp(X), given X's triplet.
LevyTriplet geometric_to_linear(const LevyTriplet& tX, const QuadratureSettings& q = {});

/// Inverse of geometric_to_linear; throws JumpBelowMinusOne when ν_L charges (-inf, -1].
LevyTriplet linear_to_geometric(const LevyTriplet& tL, const QuadratureSettings& q = {});

} // namespace levy_emm
