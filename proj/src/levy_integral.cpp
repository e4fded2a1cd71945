#include "levy_emm/levy_integral.hpp"

#include "levy_emm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levy_emm {

namespace {

constexpr double kNegInf = -kInf;

int sgn(double v) { return (v > 0) - (v < 0); }

bool in_support(IntegrandSupport s, double x) {
    const bool inner = std::abs(x) <= 1.0;
    switch (s) {
    case IntegrandSupport::InnerOnly: return inner;
    case IntegrandSupport::OuterOnly: return !inner;
    case IntegrandSupport::Everywhere: break;
    }
    return true;
}

// Sorted cut points with near-duplicates (from rounding in different
// code paths) merged.
std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    v.erase(std::unique(v.begin(), v.end(), close), v.end());
    return v;
}

// Sum over doubling panels [a 2^k, a 2^{k+1}] for integrands without a tail
// hint. Divergence is declared once the partial sums exceed 1/abs_tol.
ExtendedReal doubling_tail(const Integrand1D& f, double a, const QuadratureSettings& q) {
    double sum = 0.0;
    int quiet = 0;
    double lo = a;
    for (int k = 0; k < 1000; ++k) {
        const double hi = 2.0 * lo;
        const double panel = integrate_panel(f, lo, hi, q).value;
        sum += panel;
        if (std::abs(sum) > 1.0 / q.abs_tol) return ExtendedReal::infinity(sgn(sum));
        if (std::abs(panel) <= std::max(q.abs_tol, q.rel_tol * std::abs(sum))) {
            if (++quiet >= 3) return sum;
        } else {
            quiet = 0;
        }
        lo = hi;
        if (!std::isfinite(lo)) break;
    }
    throw QuadratureFailure("tail partial sums did not settle");
}

// ∫_a^inf f for a > 0 in the variable s = log(x / a). Power-law tails become
// exponential in s, which exp-sinh resolves; exponential tails become
// doubly exponential.
double log_half_line(const Integrand1D& f, double a, const QuadratureSettings& q) {
    auto g = [&](double s) {
        const double x = a * std::exp(s);
        if (!std::isfinite(x)) return 0.0;
        const double v = f(x);
        return v == 0.0 ? 0.0 : v * x;
    };
    return integrate_half_line(g, 0.0, q).value;
}

using Weighted = std::function<double(double, double, double)>;

LevyIntegrand make(std::function<double(double)> value, Weighted weighted, double tilt = 0.0) {
    LevyIntegrand g;
    g.value = std::move(value);
    g.weighted = std::move(weighted);
    g.tilt = tilt;
    return g;
}

double exp_times_density(double log_factor, double ld) { return ld == kNegInf ? 0.0 : std::exp(log_factor + ld); }

} // namespace

double expm1_minus_x(double y) {
    if (std::abs(y) < 0.1) {
        // y^2/2! + y^3/3! + ... ; 14 terms reach double precision for |y| < 0.1
        double term = y * y / 2.0;
        double sum = term;
        for (int k = 3; k < 17; ++k) {
            term *= y / k;
            sum += term;
        }
        return sum;
    }
    return std::expm1(y) - y;
}

double LevyIntegrand::weighted_value(double x, double log_density, double log_density_tilted) const {
    if (weighted) return weighted(x, log_density, log_density_tilted);
    if (log_density == kNegInf) return 0.0;
    const double v = value(x);
    if (v == 0.0 || std::isnan(v)) return v;
    return std::copysign(std::exp(std::log(std::abs(v)) + log_density), v);
}

ExtendedReal levy_integral(const LevyMeasure& nu, const LevyIntegrand& g, IntegralKind kind,
                           const QuadratureSettings& q) {
    const double w = q.zero_window;
    ExtendedReal total = 0.0;
    for (const Atom& a : nu.atom_list()) {
        if (!in_support(g.support, a.x)) continue;
        total += ExtendedReal(a.mass * g.value(a.x));
    }
    if (!nu.has_density()) return total;

    const bool inner = g.support != IntegrandSupport::OuterOnly;
    const bool outer = g.support != IntegrandSupport::InnerOnly;
    const bool compensated = kind == IntegralKind::SmallJumpCompensated;
    const double beta = nu.activity_index();
    const std::optional<double> lower = nu.support_lower();

    if (compensated && g.order_at_zero < 2.0)
        throw InvalidArgument("compensated integrand must be O(x^2) at 0");

    // Divergence classification first: near zero, then along both tails.
    ExtendedReal divergent = 0.0;
    if (inner && !compensated && beta >= 0.0 && !(g.order_at_zero > beta)) {
        if (nu.has_mass_on(Side::Right) && g.sign_right_of_zero != 0)
            divergent += ExtendedReal::infinity(g.sign_right_of_zero);
        if (nu.has_mass_on(Side::Left) && g.sign_left_of_zero != 0)
            divergent += ExtendedReal::infinity(g.sign_left_of_zero);
    }
    bool hinted_tail[2] = {false, false};
    if (outer) {
        for (Side side : {Side::Left, Side::Right}) {
            const TailHint t = nu.tail(side);
            if (t.empty) continue;
            const auto& hint = side == Side::Right ? g.right_tail : g.left_tail;
            if (!hint) continue;
            hinted_tail[side == Side::Right] = true;
            if (!tail_integral_finite(t, side, hint->exp_rate, hint->power))
                divergent += ExtendedReal::infinity(hint->sign);
        }
    }
    if (!(divergent == ExtendedReal(0.0))) return total + divergent;

    auto f = [&](double x) {
        const double ld = nu.log_density(x);
        const double ldt = g.tilt == 0.0 ? ld : nu.log_density_tilted(x, g.tilt);
        return g.weighted_value(x, ld, ldt);
    };

    std::vector<double> cuts = {-1.0, 1.0, 0.0};
    if (q.inner_cut < 1.0) {
        cuts.push_back(-q.inner_cut);
        cuts.push_back(q.inner_cut);
    }
    for (double b : nu.breakpoints()) cuts.push_back(b);
    for (double b : g.breakpoints) cuts.push_back(b);
    if (lower) cuts.push_back(*lower);
    if (compensated) {
        cuts.push_back(-w);
        cuts.push_back(w);
    }
    cuts = sorted_unique(std::move(cuts));

    double sum = 0.0;
    auto add_panel = [&](double a, double b) {
        if (lower) a = std::max(a, *lower);
        if (!(b > a)) return;
        sum += integrate_panel(f, a, b, q).value;
    };

    if (inner) {
        std::vector<double> inner_cuts;
        for (double c : cuts)
            if (c >= -1.0 && c <= 1.0) inner_cuts.push_back(c);
        for (std::size_t i = 0; i + 1 < inner_cuts.size(); ++i) {
            const double a = inner_cuts[i], b = inner_cuts[i + 1];
            if (compensated && a >= -w && b <= w) continue;
            add_panel(a, b);
        }
        if (compensated) sum += g.taylor2 * nu.window_moment(2, w) + g.taylor3 * nu.window_moment(3, w);
    }

    ExtendedReal tails = 0.0;
    if (outer) {
        // right tail: finite panels between breakpoints beyond 1, then a half line
        if (!nu.tail(Side::Right).empty) {
            double start = 1.0;
            for (double c : cuts) {
                if (c > start) {
                    add_panel(start, c);
                    start = c;
                }
            }
            if (hinted_tail[1]) sum += log_half_line(f, start, q);
            else tails += doubling_tail(f, start, q);
        }
        const bool left_possible = !(lower && *lower >= -1.0);
        if (left_possible && !nu.tail(Side::Left).empty) {
            double start = -1.0;
            for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) {
                if (*it < start) {
                    add_panel(*it, start);
                    start = *it;
                }
            }
            auto reflected = [&](double u) { return f(-u); };
            if (hinted_tail[0]) sum += log_half_line(reflected, -start, q);
            else tails += doubling_tail(reflected, -start, q);
        }
    }
    return total + ExtendedReal(sum) + tails;
}

double levy_integral_range(const LevyMeasure& nu, const std::function<double(double)>& g, double lo, double hi,
                           const QuadratureSettings& q) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidArgument("levy_integral_range needs finite lo < hi");
    double total = 0.0;
    for (const Atom& a : nu.atom_list())
        if (a.x > lo && a.x <= hi) total += a.mass * g(a.x);
    if (!nu.has_density()) return total;
    std::vector<double> cuts = {lo, hi, 0.0, -1.0, 1.0};
    for (double b : nu.breakpoints()) cuts.push_back(b);
    if (auto l = nu.support_lower()) cuts.push_back(*l);
    cuts = sorted_unique(std::move(cuts));
    const auto lower = nu.support_lower();
    auto f = [&](double x) {
        const double ld = nu.log_density(x);
        if (ld == kNegInf) return 0.0;
        const double v = g(x);
        return v == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(v)) + ld), v);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (a < lo || b > hi) continue;
        if (lower) a = std::max(a, *lower);
        if (b > a) total += integrate_panel(f, a, b, q).value;
    }
    return total;
}

// ---- integrand factories -------------------------------------------------

LevyIntegrand cumulant_integrand(double kappa) {
    LevyIntegrand g = make(
        [kappa](double x) { return std::abs(x) <= 1.0 ? expm1_minus_x(kappa * x) : std::expm1(kappa * x); },
        [kappa](double x, double ld, double ldt) {
            if (ld == kNegInf) return 0.0;
            if (std::abs(x) <= 1.0) return expm1_minus_x(kappa * x) * std::exp(ld);
            return exp_times_density(0.0, ldt) - std::exp(ld);
        },
        kappa);
    if (kappa == 0.0) {
        g.right_tail = g.left_tail = GrowthHint{kNegInf, 0.0, 0};
    } else {
        g.right_tail = kappa > 0 ? GrowthHint{kappa, 0.0, 1} : GrowthHint{0.0, 0.0, -1};
        g.left_tail = kappa < 0 ? GrowthHint{kappa, 0.0, 1} : GrowthHint{0.0, 0.0, -1};
    }
    g.order_at_zero = 2.0;
    g.taylor2 = kappa * kappa / 2.0;
    g.taylor3 = kappa * kappa * kappa / 6.0;
    g.sign_right_of_zero = g.sign_left_of_zero = 1;
    return g;
}

LevyIntegrand cumulant_derivative_integrand(double kappa) {
    LevyIntegrand g = make(
        [kappa](double x) { return std::abs(x) <= 1.0 ? x * std::expm1(kappa * x) : x * std::exp(kappa * x); },
        [kappa](double x, double ld, double ldt) {
            if (ld == kNegInf) return 0.0;
            if (std::abs(x) <= 1.0) return x * std::expm1(kappa * x) * std::exp(ld);
            return std::copysign(exp_times_density(std::log(std::abs(x)), ldt), x);
        },
        kappa);
    g.right_tail = GrowthHint{kappa, 1.0, 1};
    g.left_tail = GrowthHint{kappa, 1.0, -1};
    g.order_at_zero = kappa == 0.0 ? kInf : 2.0;
    g.sign_right_of_zero = g.sign_left_of_zero = sgn(kappa);
    g.taylor2 = kappa;
    g.taylor3 = kappa * kappa / 2.0;
    return g;
}

LevyIntegrand cumulant_second_derivative_integrand(double kappa) {
    LevyIntegrand g = make([kappa](double x) { return x * x * std::exp(kappa * x); },
                           [](double x, double, double ldt) { return exp_times_density(2.0 * std::log(std::abs(x)), ldt); },
                           kappa);
    g.right_tail = GrowthHint{kappa, 2.0, 1};
    g.left_tail = GrowthHint{kappa, 2.0, 1};
    g.order_at_zero = 2.0;
    g.taylor2 = 1.0;
    g.taylor3 = kappa;
    return g;
}

LevyIntegrand esscher_drift_integrand(double kappa) {
    LevyIntegrand g = make([kappa](double x) { return std::abs(x) <= 1.0 ? x * std::expm1(kappa * x) : 0.0; }, {});
    g.support = IntegrandSupport::InnerOnly;
    g.order_at_zero = kappa == 0.0 ? kInf : 2.0;
    g.sign_right_of_zero = g.sign_left_of_zero = sgn(kappa);
    g.taylor2 = kappa;
    g.taylor3 = kappa * kappa / 2.0;
    return g;
}

LevyIntegrand small_jump_variation_integrand() {
    LevyIntegrand g = make([](double x) { return std::abs(x) <= 1.0 ? x * x : 0.0; }, {});
    g.support = IntegrandSupport::InnerOnly;
    g.order_at_zero = 2.0;
    g.taylor2 = 1.0;
    return g;
}

LevyIntegrand large_jump_mass_integrand() {
    LevyIntegrand g = make([](double x) { return std::abs(x) > 1.0 ? 1.0 : 0.0; }, {});
    g.support = IntegrandSupport::OuterOnly;
    g.right_tail = g.left_tail = GrowthHint{0.0, 0.0, 1};
    return g;
}

LevyIntegrand levy_integrability_integrand() {
    LevyIntegrand g = make([](double x) { return std::min(1.0, x * x); }, {});
    g.right_tail = g.left_tail = GrowthHint{0.0, 0.0, 1};
    g.order_at_zero = 2.0;
    g.taylor2 = 1.0;
    return g;
}

LevyIntegrand large_jump_exponential_integrand(double kappa) {
    LevyIntegrand g = make([kappa](double x) { return std::abs(x) > 1.0 ? std::exp(kappa * x) : 0.0; },
                           [](double x, double, double ldt) { return std::abs(x) > 1.0 ? exp_times_density(0.0, ldt) : 0.0; },
                           kappa);
    g.support = IntegrandSupport::OuterOnly;
    g.right_tail = g.left_tail = GrowthHint{kappa, 0.0, 1};
    return g;
}

LevyIntegrand one_sided_tail_integrand(Side side, double kappa, double power) {
    const bool right = side == Side::Right;
    auto on_side = [right](double x) { return right ? x > 1.0 : x < -1.0; };
    LevyIntegrand g = make(
        [=](double x) { return on_side(x) ? std::pow(std::abs(x), power) * std::exp(kappa * x) : 0.0; },
        [=](double x, double, double ldt) {
            return on_side(x) ? exp_times_density(power * std::log(std::abs(x)), ldt) : 0.0;
        },
        kappa);
    g.support = IntegrandSupport::OuterOnly;
    const GrowthHint active{kappa, power, 1};
    const GrowthHint inactive{kNegInf, 0.0, 0};
    g.right_tail = right ? active : inactive;
    g.left_tail = right ? inactive : active;
    return g;
}

LevyIntegrand log_to_linear_drift_integrand() {
    const double ln2 = std::numbers::ln2;
    LevyIntegrand g = make(
        [ln2](double x) {
            if (x > 1.0) return 0.0;
            if (x > ln2) return -x;
            if (x >= -1.0) return expm1_minus_x(x);
            return std::expm1(x);
        },
        {});
    g.right_tail = GrowthHint{kNegInf, 0.0, 0};
    g.left_tail = GrowthHint{0.0, 0.0, -1};
    g.order_at_zero = 2.0;
    g.taylor2 = 0.5;
    g.taylor3 = 1.0 / 6.0;
    g.breakpoints = {ln2};
    return g;
}

} // namespace levy_emm
