#pragma once

#include "levy_emm/extended_real.hpp"
#include "levy_emm/levy_measure.hpp"
#include "levy_emm/quadrature.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace levy_emm {

/// Growth of an integrand along a tail: f(x) ~ sign * |x|^power * e^{exp_rate x}.
/// exp_rate = -inf marks an integrand that decays faster than any exponential.
struct GrowthHint {
    double exp_rate = 0.0;
    double power = 0.0;
    int sign = 1;
};

enum class IntegralKind { Plain, SmallJumpCompensated };

/// Region of R on which an integrand can be nonzero.
enum class IntegrandSupport { Everywhere, InnerOnly, OuterOnly };

/// g for ∫ g(x) ν(dx). Besides pointwise values it carries the analytic
/// facts used for divergence detection and the Taylor data used in the
/// window around 0.
struct LevyIntegrand {
    std::function<double(double)> value;
    /// Exponential rate s of the integrand; the engine passes the measure's
    /// log density tilted by s x as a third argument to `weighted`.
    double tilt = 0.0;
    /// g(x) * exp(log_density), evaluated without overflow; defaults to a
    /// log-domain product built from `value`.
    std::function<double(double x, double log_density, double log_density_tilted)> weighted;
    /// Tail growth; nullopt triggers divergence detection by doubling panels.
    std::optional<GrowthHint> right_tail;
    std::optional<GrowthHint> left_tail;
    /// g(x) ~ sign * |x|^order_at_zero near 0 (per side).
    double order_at_zero = 0.0;
    int sign_right_of_zero = 1;
    int sign_left_of_zero = 1;
    /// g(x) ≈ taylor2 x^2 + taylor3 x^3 near 0; required for the compensated kind.
    double taylor2 = 0.0;
    double taylor3 = 0.0;
    IntegrandSupport support = IntegrandSupport::Everywhere;
    std::vector<double> breakpoints;

    double weighted_value(double x, double log_density, double log_density_tilted) const;
};

/// ∫ g dν over the whole line. Atoms are summed exactly; the density part is
/// split into panels (-inf,-1], [-1,-w], [-w,w], [w,1], [1,inf) plus any
/// breakpoints, with w = zero_window. For the compensated kind the window is
/// evaluated from the Taylor coefficients and the window moments of ν.
///
/// Returns +-inf (or undefined) when the integral diverges on some part.
/// Throws QuadratureFailure when a panel misses its tolerance.
ExtendedReal levy_integral(const LevyMeasure& nu, const LevyIntegrand& g, IntegralKind kind,
                           const QuadratureSettings& q);

/// Integral over {x : lo < x <= hi} only (plain kind, finite bounds), atoms included.
double levy_integral_range(const LevyMeasure& nu, const std::function<double(double)>& g, double lo, double hi,
                           const QuadratureSettings& q);

/// expm1(y) - y with full relative accuracy for small |y|.
double expm1_minus_x(double y);

// ---- integrands used throughout the library ------------------------------

/// e^{kx} - 1 - k h(x)   (cumulant integrand)
LevyIntegrand cumulant_integrand(double kappa);
/// x e^{kx} - h(x)       (derivative of the cumulant)
LevyIntegrand cumulant_derivative_integrand(double kappa);
/// x^2 e^{kx}            (second derivative of the cumulant)
LevyIntegrand cumulant_second_derivative_integrand(double kappa);
/// h(x) (e^{kx} - 1)     (drift shift of an Esscher transform)
LevyIntegrand esscher_drift_integrand(double kappa);
/// x^2 1{|x|<=1}
LevyIntegrand small_jump_variation_integrand();
/// 1{|x|>1}
LevyIntegrand large_jump_mass_integrand();
/// min(1, x^2)
LevyIntegrand levy_integrability_integrand();
/// e^{kx} 1{|x|>1}
LevyIntegrand large_jump_exponential_integrand(double kappa);
/// |x|^k e^{a x} 1{x>1} or 1{x<-1}; used for endpoint checks
LevyIntegrand one_sided_tail_integrand(Side side, double kappa, double power);
/// (e^x - 1) 1{|e^x-1|<=1} - x 1{|x|<=1}   (drift correction of the
/// log-price to stochastic-log conversion)
LevyIntegrand log_to_linear_drift_integrand();

} // namespace levy_emm
