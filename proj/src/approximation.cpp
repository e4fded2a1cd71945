#include "levy_emm/approximation.hpp"

#include "levy_emm/errors.hpp"
#include "levy_emm/levy_integral.hpp"
#include "levy_emm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace levy_emm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

IntegrandSupport penalty_support(const PenaltyFamily& p) {
    return p.inner_radius() >= 1.0 ? IntegrandSupport::OuterOnly : IntegrandSupport::Everywhere;
}

// Near 0 the integrands below vanish identically on the inner radius; any
// order above the activity index of a Lévy measure is then accurate.
double penalty_order_at_zero(const PenaltyFamily& p) { return p.inner_radius() > 0.0 ? 8.0 : 0.0; }

LevyTriplet tempered_unchecked(const LevyTriplet& t, const PenaltyFamily& p, int n) {
    bool no_outer_mass = p.inner_radius() >= 1.0;
    if (t.nu.has_density()) no_outer_mass = no_outer_mass && t.nu.tail(Side::Left).empty && t.nu.tail(Side::Right).empty;
    for (const Atom& a : t.nu.atom_list()) no_outer_mass = no_outer_mass && std::abs(a.x) <= 1.0;
    if (no_outer_mass) return t;
    LevyTriplet out = t;
    out.nu = LevyMeasure::tempered(t.nu, TemperingWeight{TemperingWeight::Penalty{p, n}, 0.0});
    return out;
}

PenaltyCondition check_monotone(const PenaltyFamily& p) {
    const double xs[] = {0.0, 0.25, 0.5, 0.9, 1.0, 1.0001, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 1e3, 1e4, 1e6};
    constexpr int kMaxN = 64;
    constexpr int kLimitN = 1 << 30;
    PenaltyCondition c;
    for (double ax : xs) {
        for (double x : {ax, -ax}) {
            double prev = p.rho(1, x);
            for (int n = 1; n <= kMaxN; ++n) {
                const double r = p.rho(n, x);
                if (!(r >= 0.0) || !std::isfinite(r)) {
                    c.detail = "rho_" + std::to_string(n) + "(" + fmt(x) + ") = " + fmt(r) + " is not a finite value >= 0";
                    c.witness_x = x;
                    c.witness_n = n;
                    return c;
                }
                if (r > prev * (1.0 + 1e-14)) {
                    c.detail = "rho_" + std::to_string(n) + "(" + fmt(x) + ") = " + fmt(r) + " exceeds rho_" +
                               std::to_string(n - 1) + " = " + fmt(prev);
                    c.witness_x = x;
                    c.witness_n = n;
                    return c;
                }
                prev = r;
            }
            if (std::abs(x) <= 1e3) {
                const double far = p.rho(kLimitN, x);
                if (far > 1e-6 * std::max(1.0, p.rho(1, x))) {
                    c.detail = "rho_n(" + fmt(x) + ") does not tend to 0: rho_2^30 = " + fmt(far);
                    c.witness_x = x;
                    c.witness_n = kLimitN;
                    return c;
                }
            }
        }
    }
    c.pass = true;
    c.detail = "0 <= rho_{n+1} <= rho_n for n < 64 and rho_n -> 0 on the grid";
    return c;
}

PenaltyCondition check_superlinear(const PenaltyFamily& p) {
    PenaltyCondition c;
    if (!(p.tail_power() > 1.0)) {
        c.detail = "rho_n grows like |x|^" + fmt(p.tail_power()) + ", so |x|/rho_n does not tend to 0";
        c.witness_n = 1;
        c.witness_x = 1e8;
        return c;
    }
    for (double sgn : {1.0, -1.0}) {
        const double near = 1e4 * sgn;
        const double far = 1e8 * sgn;
        const double r_near = std::abs(near) / p.rho(1, near);
        const double r_far = std::abs(far) / p.rho(1, far);
        if (!(r_far < 0.5 * r_near)) {
            c.detail = "|x|/rho_1(x) = " + fmt(r_far) + " at " + fmt(far) + " versus " + fmt(r_near) + " at " +
                       fmt(near);
            c.witness_n = 1;
            c.witness_x = far;
            return c;
        }
    }
    c.pass = true;
    c.detail = "rho_n ~ |x|^" + fmt(p.tail_power()) + "; |x|/rho_1 decreasing on [1e4, 1e8]";
    return c;
}

ExtendedReal mass_gap_integral(const LevyMeasure& nu, const PenaltyFamily& p, int n, const QuadratureSettings& q) {
    LevyIntegrand g;
    g.value = [p, n](double x) { return -std::expm1(-p.rho(n, x)); };
    g.right_tail = g.left_tail = GrowthHint{0.0, 0.0, 1};
    g.support = penalty_support(p);
    g.order_at_zero = penalty_order_at_zero(p);
    return levy_integral(nu, g, IntegralKind::Plain, q);
}

} // namespace

PenaltyDiagnostics check_penalty(const PenaltyFamily& p, const LevyMeasure& nu, const QuadratureSettings& q) {
    PenaltyDiagnostics d;
    d.monotone = check_monotone(p);
    d.superlinear = check_superlinear(p);
    try {
        const ExtendedReal v = mass_gap_integral(nu, p, 1, q);
        if (v.is_finite()) {
            d.integrable.pass = true;
            d.integrable.detail = "int (1 - e^{-rho_1}) dnu = " + fmt(v.value());
        } else {
            d.integrable.detail = "int (1 - e^{-rho_1}) dnu diverges";
            d.integrable.witness_n = 1;
        }
    } catch (const LevyError& e) {
        d.integrable.detail = std::string("quadrature failed: ") + e.what();
        d.integrable.witness_n = 1;
    }
    return d;
}

LevyTriplet perturbed_triplet(const LevyTriplet& t, const PenaltyFamily& p, int n, const QuadratureSettings& q) {
    if (n < 1) throw InvalidArgument("penalty index n must be >= 1");
    validate_triplet(t, q);
    const PenaltyDiagnostics d = check_penalty(p, t.nu, q);
    if (!d.all_pass()) {
        std::string why;
        for (const PenaltyCondition* c : {&d.monotone, &d.superlinear, &d.integrable})
            if (!c->pass) why += (why.empty() ? "" : "; ") + c->detail;
        throw PenaltyViolation("penalty " + p.name() + " rejected: " + why);
    }
    return tempered_unchecked(t, p, n);
}

double penalty_mass_gap(const LevyMeasure& nu, const PenaltyFamily& p, int n, const QuadratureSettings& q) {
    const ExtendedReal v = mass_gap_integral(nu, p, n, q);
    if (!v.is_finite()) throw PenaltyViolation("int (1 - e^{-rho_n}) dnu diverges");
    return v.value();
}

double penalty_tilted_moment(const LevyMeasure& nu, const PenaltyFamily& p, int n, double kappa,
                             const QuadratureSettings& q) {
    LevyIntegrand g;
    g.value = [p, n, kappa](double x) {
        const double r = p.rho(n, x);
        return r == 0.0 || r == kInf ? 0.0 : std::exp(std::log(r) + kappa * x - r);
    };
    g.tilt = kappa;
    g.weighted = [p, n](double x, double, double ldt) {
        const double r = p.rho(n, x);
        if (r == 0.0 || r == kInf || ldt == -kInf) return 0.0;
        return std::exp(std::log(r) + ldt - r);
    };
    const double tp = p.tail_power();
    if (tp > 1.0) {
        g.right_tail = g.left_tail = GrowthHint{-kInf, 0.0, 1};
    } else if (tp == 1.0) {
        const double c = p.tail_coefficient(n);
        g.right_tail = GrowthHint{kappa - c, 1.0, 1};
        g.left_tail = GrowthHint{kappa + c, 1.0, 1};
    } else {
        g.right_tail = g.left_tail = GrowthHint{kappa, tp, 1};
    }
    g.support = penalty_support(p);
    g.order_at_zero = penalty_order_at_zero(p);
    const ExtendedReal v = levy_integral(nu, g, IntegralKind::Plain, q);
    if (!v.is_finite()) throw KappaOutsideI("int rho_n e^{kx - rho_n} dnu diverges at k = " + fmt(kappa));
    return v.value();
}

std::vector<int> default_schedule(int n_max) {
    std::vector<int> s;
    for (long long n = 1; n <= n_max; n *= 2) s.push_back(static_cast<int>(n));
    return s;
}

ApproxTrace approx_sequence(const LevyTriplet& t, double T, const PenaltyFamily& p, const std::vector<int>& schedule,
                            const QuadratureSettings& q, const RootSettings& r, int threads) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    if (schedule.empty()) throw InvalidArgument("empty n schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 1) throw InvalidArgument("schedule entries must be >= 1");
        if (i > 0 && schedule[i] <= schedule[i - 1]) throw InvalidArgument("schedule must be strictly increasing");
    }
    validate_triplet(t, q);
    const Monotonicity mono = is_monotone(t, q);
    if (mono != Monotonicity::NotMonotone)
        throw ArbitrageMarket(std::string("L is ") + to_string(mono) + "; no martingale measure exists");
    const PenaltyDiagnostics d = check_penalty(p, t.nu, q);
    if (!d.all_pass()) perturbed_triplet(t, p, 1, q); // throws with the diagnostics

    ApproxTrace trace;
    const MinimumPoint m = minimize_mgf(t, T, q, r);
    trace.kappa_limit = m.kappa0;
    trace.limit_kind = m.kind;
    trace.entropy_limit = std::max(0.0, -T * cumulant(t, m.kappa0, q).value());

    trace.steps.resize(schedule.size());
    parallel_for(schedule.size(), threads > 0 ? threads : configured_threads(), [&](std::size_t i) {
        ApproxStep& s = trace.steps[i];
        s.n = schedule[i];
        try {
            const LevyTriplet tn = tempered_unchecked(t, p, s.n);
            const EsscherResult res = solve_linear_emm(tn, T, q, r);
            if (!res.kappa0) throw NoFiniteMinimizer("no Esscher parameter under P_n: " + res.diagnostic);
            s.kappa_n = *res.kappa0;
            s.entropy_n = std::max(0.0, -T * cumulant(tn, s.kappa_n, q).value());
            s.mass_gap = penalty_mass_gap(t.nu, p, s.n, q);
            s.correction_n = T * (s.mass_gap - penalty_tilted_moment(t.nu, p, s.n, s.kappa_n, q));
            s.entropy_vs_P = s.entropy_n + s.correction_n;
        } catch (const LevyError& e) {
            s.kappa_n = s.entropy_n = s.correction_n = s.entropy_vs_P = s.mass_gap = kNaN;
            s.error = std::string(e.name()) + ": " + e.what();
        }
    });
    return trace;
}

} // namespace levy_emm
