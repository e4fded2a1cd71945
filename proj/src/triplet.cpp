#include "levy_emm/triplet.hpp"

#include "levy_emm/errors.hpp"
#include "levy_emm/levy_integral.hpp"

#include <cmath>
#include <string>

namespace levy_emm {

ValidatedTriplet validate_triplet(const LevyTriplet& t, const QuadratureSettings& q) {
    q.validate();
    if (!std::isfinite(t.b)) throw InvalidArgument("drift must be finite");
    if (std::isnan(t.sigma2) || t.sigma2 < 0.0) throw NegativeVariance("sigma2 = " + std::to_string(t.sigma2));
    if (!std::isfinite(t.sigma2)) throw InvalidArgument("sigma2 must be finite");

    ValidatedTriplet v;
    v.triplet_ = t;
    if (t.nu.is_zero()) return v;
    if (t.nu.has_density() && t.nu.activity_index() >= 2.0)
        throw NonIntegrableLevyMeasure(t.nu.describe() + ": density not integrable against x^2 at 0");
    const ExtendedReal small = levy_integral(t.nu, small_jump_variation_integrand(), IntegralKind::Plain, q);
    const ExtendedReal large = levy_integral(t.nu, large_jump_mass_integrand(), IntegralKind::Plain, q);
    if (!small.is_finite() || !large.is_finite())
        throw NonIntegrableLevyMeasure(t.nu.describe() + ": ∫min(1,x^2) dν diverges");
    v.small_jump_variation_ = small.value();
    v.large_jump_mass_ = large.value();
    return v;
}

ExtendedReal cumulant(const LevyTriplet& t, double kappa, const QuadratureSettings& q) {
    if (kappa == 0.0) return 0.0;
    const ExtendedReal jumps = t.nu.is_zero()
                                   ? ExtendedReal(0.0)
                                   : levy_integral(t.nu, cumulant_integrand(kappa), IntegralKind::SmallJumpCompensated, q);
    return ExtendedReal(t.b * kappa + 0.5 * t.sigma2 * kappa * kappa) + jumps;
}

ExtendedReal cumulant_derivative(const LevyTriplet& t, double kappa, const QuadratureSettings& q) {
    const ExtendedReal jumps =
        t.nu.is_zero() ? ExtendedReal(0.0)
                       : levy_integral(t.nu, cumulant_derivative_integrand(kappa), IntegralKind::SmallJumpCompensated, q);
    if (jumps.is_undefined())
        throw PsiUndefined(t.nu.describe() + ": both tails of ∫ x e^{kx} ν(dx) diverge at k = " + std::to_string(kappa));
    return ExtendedReal(t.b + t.sigma2 * kappa) + jumps;
}

ExtendedReal cumulant_second_derivative(const LevyTriplet& t, double kappa, const QuadratureSettings& q) {
    const ExtendedReal jumps =
        t.nu.is_zero() ? ExtendedReal(0.0)
                       : levy_integral(t.nu, cumulant_second_derivative_integrand(kappa),
                                       IntegralKind::SmallJumpCompensated, q);
    return ExtendedReal(t.sigma2) + jumps;
}

ExtendedReal mgf(const LevyTriplet& t, double T, double kappa, const QuadratureSettings& q) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    return exp(T * cumulant(t, kappa, q));
}

ExtendedReal mgf_derivative(const LevyTriplet& t, double T, double kappa, const QuadratureSettings& q) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    const ExtendedReal m = cumulant_derivative(t, kappa, q);
    if (!m.is_finite()) return m;
    const ExtendedReal phi = mgf(t, T, kappa, q);
    if (!phi.is_finite()) return ExtendedReal::infinity(m.sign());
    return ExtendedReal(phi.value() * T * m.value());
}

const char* to_string(Monotonicity m) {
    switch (m) {
    case Monotonicity::IncreasingSubordinator: return "IncreasingSubordinator";
    case Monotonicity::DecreasingSubordinator: return "DecreasingSubordinator";
    case Monotonicity::NotMonotone: break;
    }
    return "NotMonotone";
}

Monotonicity is_monotone(const LevyTriplet& t, const QuadratureSettings& q) {
    if (t.sigma2 > 0.0) return Monotonicity::NotMonotone;
    const bool up = t.nu.has_mass_on(Side::Right);
    const bool down = t.nu.has_mass_on(Side::Left);
    if (up && down) return Monotonicity::NotMonotone;
    if (t.nu.has_density() && t.nu.activity_index() >= 1.0) return Monotonicity::NotMonotone;

    double variation_drift = 0.0; // ∫_{|x|<=1} x ν(dx)
    if (!t.nu.is_zero()) {
        LevyIntegrand h;
        h.value = [](double x) { return truncation(x); };
        h.support = IntegrandSupport::InnerOnly;
        h.order_at_zero = 1.0;
        h.sign_left_of_zero = -1;
        const ExtendedReal v = levy_integral(t.nu, h, IntegralKind::Plain, q);
        if (!v.is_finite()) return Monotonicity::NotMonotone;
        variation_drift = v.value();
    }
    const double drift0 = t.b - variation_drift;
    if (!down && drift0 >= 0.0) return Monotonicity::IncreasingSubordinator;
    if (!up && drift0 <= 0.0) return Monotonicity::DecreasingSubordinator;
    return Monotonicity::NotMonotone;
}

namespace {

double conversion_drift(const LevyMeasure& nu_x, const QuadratureSettings& q) {
    if (nu_x.is_zero()) return 0.0;
    const ExtendedReal v = levy_integral(nu_x, log_to_linear_drift_integrand(), IntegralKind::SmallJumpCompensated, q);
    if (!v.is_finite()) throw QuadratureFailure("conversion drift integral is " + v.to_string());
    return v.value();
}

} // namespace

LevyTriplet geometric_to_linear(const LevyTriplet& tX, const QuadratureSettings& q) {
    LevyTriplet tL;
    tL.b = tX.b + 0.5 * tX.sigma2 + conversion_drift(tX.nu, q);
    tL.sigma2 = tX.sigma2;
    tL.nu = LevyMeasure::pushforward(tX.nu, PushforwardMap::ExpMinusOne);
    return tL;
}

LevyTriplet linear_to_geometric(const LevyTriplet& tL, const QuadratureSettings& q) {
    for (const Atom& a : tL.nu.atom_list())
        if (a.x <= -1.0) throw JumpBelowMinusOne("atom at " + std::to_string(a.x));
    if (tL.nu.has_density()) {
        const auto lower = tL.nu.support_lower();
        if (!(lower && *lower >= -1.0) && !tL.nu.tail(Side::Left).empty)
            throw JumpBelowMinusOne(tL.nu.describe() + " charges (-inf, -1]");
    }
    LevyTriplet tX;
    tX.nu = LevyMeasure::pushforward(tL.nu, PushforwardMap::LogOnePlus);
    tX.sigma2 = tL.sigma2;
    tX.b = tL.b - 0.5 * tL.sigma2 - conversion_drift(tX.nu, q);
    return tX;
}

} // namespace levy_emm
