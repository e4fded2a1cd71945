#include "levy_emm/esscher.hpp"

#include "levy_emm/errors.hpp"
#include "levy_emm/levy_integral.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>

namespace levy_emm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

LevyMeasure tilted(const LevyMeasure& nu, double kappa) {
    TemperingWeight w;
    w.tilt = kappa;
    return LevyMeasure::tempered(nu, w);
}

// ν_k(dx) = e^{kx} ν(dx) in the most specific representation available.
LevyMeasure tilt_measure(const LevyMeasure& nu, double k) {
    if (nu.is_zero()) return nu;
    return std::visit(
        Overloaded{
            [&](const FiniteAtomic& m) {
                std::vector<Atom> out = m.atoms;
                for (Atom& a : out) a.mass *= std::exp(k * a.x);
                return LevyMeasure::atoms(std::move(out));
            },
            [&](const JumpDiffusionDensity& m) {
                if (const auto* g = std::get_if<GaussianJumps>(&m.jumps)) {
                    const double s2 = g->stddev * g->stddev;
                    return LevyMeasure::gaussian_jumps(m.intensity * std::exp(k * g->mean + 0.5 * k * k * s2),
                                                       g->mean + k * s2, g->stddev);
                }
                const auto& d = std::get<DoubleExponentialJumps>(m.jumps);
                const double up = m.intensity * d.p * d.eta_plus / (d.eta_plus - k);
                const double down = m.intensity * (1.0 - d.p) * d.eta_minus / (d.eta_minus + k);
                return LevyMeasure::double_exponential_jumps(up + down, up / (up + down), d.eta_plus - k,
                                                             d.eta_minus + k);
            },
            [&](const VarianceGamma& m) { return LevyMeasure::variance_gamma(m.C, m.G + k, m.M - k); },
            [&](const CGMY& m) {
                // at a closed endpoint of I one of the new rates is 0, outside the family
                if (m.G + k <= 0.0 || m.M - k <= 0.0) return tilted(nu, k);
                return LevyMeasure::cgmy(m.C, m.G + k, m.M - k, m.Y);
            },
            [&](const auto&) { return tilted(nu, k); },
        },
        nu.variant());
}

void require_in_I(const LevyTriplet& t, double kappa, const QuadratureSettings& q) {
    if (!std::isfinite(kappa)) throw KappaOutsideI("kappa must be finite");
    const ExpMomentInterval I = exp_moment_interval(t, q);
    if (!I.contains(kappa)) throw KappaOutsideI("kappa = " + fmt(kappa) + " is outside I = " + I.describe());
}

// Zero of an increasing function on the interval with endpoints lo, hi, which
// may be infinite or open. f may return +-inf only at the endpoints.
struct RootSearch {
    std::optional<double> root;
    std::string diagnostic;
};

RootSearch increasing_root(const std::function<ExtendedReal(double)>& f, ExtendedReal lo, bool lo_closed,
                           ExtendedReal hi, bool hi_closed, const RootSettings& r) {
    RootSearch out;
    double s;
    if (lo.is_finite() && hi.is_finite()) s = 0.5 * (lo.value() + hi.value());
    else if (lo.is_finite()) s = lo.value() + 1.0;
    else if (hi.is_finite()) s = hi.value() - 1.0;
    else s = -0.5;

    const double fs = f(s).value();
    if (fs == 0.0) {
        out.root = s;
        return out;
    }
    const int dir = fs < 0 ? +1 : -1;
    const ExtendedReal end = dir > 0 ? hi : lo;
    const bool end_closed = dir > 0 ? hi_closed : lo_closed;

    std::optional<std::pair<double, double>> found;
    if (end.is_finite()) {
        const double e = end.value();
        for (int j = 1; j <= 60 && !found; ++j) {
            const double k = e - (e - s) / std::ldexp(1.0, j);
            if (k == e) break;
            const ExtendedReal fk = f(k);
            if (fk.is_finite() && fk.value() * dir >= 0) found = std::pair{k, fk.value()};
        }
        if (!found && end_closed) {
            const ExtendedReal fe = f(e);
            if (fe.is_finite() && fe.value() * dir >= 0) found = std::pair{e, fe.value()};
        }
    } else {
        for (double step = 1.0; std::abs(s + dir * step) <= r.max_abs_kappa && !found; step *= 2.0) {
            const double k = s + dir * step;
            const ExtendedReal fk = f(k);
            if (fk.is_finite() && fk.value() * dir >= 0) found = std::pair{k, fk.value()};
        }
    }
    if (!found) {
        out.diagnostic = std::string("no sign change: the function stays ") + (dir > 0 ? "negative" : "positive") +
                         " towards " + end.to_string();
        return out;
    }
    double a = s, b = found->first, fa = fs, fb = found->second;
    if (a > b) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    if (fb == 0.0) {
        out.root = b;
        return out;
    }
    if (fa == 0.0) {
        out.root = a;
        return out;
    }
    std::uintmax_t iters = 200;
    auto g = [&](double k) { return f(k).value(); };
    auto tol = [&](double x, double y) { return std::abs(y - x) <= r.kappa_tol; };
    const auto [x, y] = boost::math::tools::toms748_solve(g, a, b, fa, fb, tol, iters);
    out.root = 0.5 * (x + y);
    return out;
}

} // namespace

LevyTriplet esscher_transform(const LevyTriplet& t, double kappa, const QuadratureSettings& q) {
    if (kappa == 0.0) return t;
    require_in_I(t, kappa, q);
    LevyTriplet out;
    out.sigma2 = t.sigma2;
    out.b = t.b + t.sigma2 * kappa;
    if (!t.nu.is_zero()) {
        const ExtendedReal shift =
            levy_integral(t.nu, esscher_drift_integrand(kappa), IntegralKind::SmallJumpCompensated, q);
        if (!shift.is_finite()) throw QuadratureFailure("Esscher drift shift is " + shift.to_string());
        out.b += shift.value();
    }
    out.nu = tilt_measure(t.nu, kappa);
    return out;
}

double esscher_entropy(const LevyTriplet& t, double T, double kappa, const QuadratureSettings& q) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    if (kappa == 0.0) return 0.0;
    require_in_I(t, kappa, q);
    const ExtendedReal m = cumulant_derivative(t, kappa, q);
    if (!m.is_finite()) throw KappaOutsideI("m(kappa) = " + m.to_string() + " at kappa = " + fmt(kappa));
    const double c = cumulant(t, kappa, q).value();
    // k m(k) - c(k) >= 0 by convexity; negative values are rounding only
    return std::max(0.0, T * (kappa * m.value() - c));
}

const char* to_string(EmmStatus s) {
    switch (s) {
    case EmmStatus::EmmExists: return "EmmExists";
    case EmmStatus::PIsAlreadyEmm: return "PIsAlreadyEmm";
    case EmmStatus::NoEmm: return "NoEmm";
    case EmmStatus::ArbitrageMarket: break;
    }
    return "ArbitrageMarket";
}

EsscherResult solve_linear_emm(const LevyTriplet& t, double T, const QuadratureSettings& q, const RootSettings& r) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    validate_triplet(t, q);
    EsscherResult res;
    const Monotonicity mono = is_monotone(t, q);
    if (mono != Monotonicity::NotMonotone) {
        res.status = EmmStatus::ArbitrageMarket;
        res.diagnostic = std::string("L is ") + to_string(mono) + "; no martingale measure exists";
        res.parameter_status.diagnostic = res.diagnostic;
        return res;
    }
    res.parameter_status = classify_esscher_parameter(t, T, q, r);
    res.minimum = minimize_mgf(t, T, q, r);
    // −log φ_T(k0) = −T c(k0) ≥ 0 since c(k0) ≤ c(0) = 0
    const double inf_entropy = std::max(0.0, -T * cumulant(t, res.minimum->kappa0, q).value());
    res.infimum_entropy = inf_entropy;

    const auto& ps = res.parameter_status;
    if (ps.kind == EsscherCase::DegenerateZeroMean) {
        res.status = EmmStatus::PIsAlreadyEmm;
        res.kappa0 = 0.0;
        res.entropy = 0.0;
        res.transformed = t;
    } else if (ps.exists) {
        res.status = EmmStatus::EmmExists;
        res.kappa0 = ps.kappa0;
        res.entropy = std::max(0.0, -T * cumulant(t, *ps.kappa0, q).value());
        res.infimum_entropy = res.entropy;
        res.transformed = esscher_transform(t, *ps.kappa0, q);
    } else {
        res.status = EmmStatus::NoEmm;
        res.diagnostic = ps.diagnostic;
    }
    return res;
}

EsscherResult solve_geometric_emm(const LevyTriplet& tX, double T, const QuadratureSettings& q,
                                  const RootSettings& r) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    validate_triplet(tX, q);
    EsscherResult res;
    const Monotonicity mono = is_monotone(tX, q);
    if (mono != Monotonicity::NotMonotone) {
        res.status = EmmStatus::ArbitrageMarket;
        res.diagnostic = std::string("X is ") + to_string(mono) + "; no martingale measure exists";
        res.parameter_status.diagnostic = res.diagnostic;
        return res;
    }
    // The stochastic logarithm has the same martingale measures as S.
    const EsscherResult linear = solve_linear_emm(geometric_to_linear(tX, q), T, q, r);
    res.infimum_entropy = linear.infimum_entropy;
    res.parameter_status = linear.parameter_status;
    res.minimum = linear.minimum;

    const ExpMomentInterval I = exp_moment_interval(tX, q);
    const ExtendedReal lo = I.a, hi = I.b + ExtendedReal(-1.0);
    const bool lo_closed = I.a_in_I, hi_closed = I.b_in_I;
    if (hi < lo || (hi == lo && !(lo_closed && hi_closed))) {
        res.status = EmmStatus::NoEmm;
        res.diagnostic = "{k : k, k+1 in I} is empty for I = " + I.describe();
        return res;
    }
    auto f = [&](double k) {
        const ExtendedReal up = cumulant(tX, k + 1.0, q), here = cumulant(tX, k, q);
        if (up.is_pos_inf()) return ExtendedReal::pos_inf();
        if (here.is_pos_inf()) return ExtendedReal::neg_inf();
        return up - here;
    };
    const RootSearch rs = increasing_root(f, lo, lo_closed, hi, hi_closed, r);
    if (!rs.root) {
        res.status = EmmStatus::NoEmm;
        res.diagnostic = "c(k+1) - c(k) has no zero on {k : k, k+1 in I}: " + rs.diagnostic;
        return res;
    }
    double k = *rs.root;
    if (std::abs(k) <= r.kappa_tol && std::abs(f(0.0).value()) <= r.m_tol) k = 0.0;
    res.kappa0 = k;
    res.status = k == 0.0 ? EmmStatus::PIsAlreadyEmm : EmmStatus::EmmExists;
    try {
        res.entropy = esscher_entropy(tX, T, k, q);
    } catch (const KappaOutsideI& e) {
        res.diagnostic = std::string("entropy of P^k not finite: ") + e.what();
    }
    res.transformed = esscher_transform(tX, k, q);
    return res;
}

MemmReport memm_report(const LevyTriplet& t, double T, MarketKind market, const QuadratureSettings& q,
                       const RootSettings& r) {
    MemmReport rep;
    rep.market = market;
    try {
        rep.result = market == MarketKind::Linear ? solve_linear_emm(t, T, q, r) : solve_geometric_emm(t, T, q, r);
    } catch (const LevyError& e) {
        rep.verdict = "error";
        rep.error_name = e.name();
        rep.error_message = e.what();
        rep.error_category = e.category();
        rep.summary = e.name() + ": " + e.what();
        return rep;
    }
    const EsscherResult& res = rep.result;
    const std::string inf = res.infimum_entropy ? fmt(*res.infimum_entropy) : "n/a";
    switch (res.status) {
    case EmmStatus::EmmExists:
        rep.verdict = "memm_equals_emm";
        rep.summary = market == MarketKind::Linear
                          ? "MEMM = EMM, kappa0=" + fmt(*res.kappa0) + ", entropy " + fmt(*res.entropy)
                          : "Esscher EMM for S exists, kappa0=" + fmt(*res.kappa0) +
                                (res.entropy ? ", entropy " + fmt(*res.entropy) : std::string());
        break;
    case EmmStatus::PIsAlreadyEmm:
        rep.verdict = "p_is_emm";
        rep.summary = "P is already the EMM (kappa0=0, entropy 0)";
        break;
    case EmmStatus::NoEmm:
        rep.verdict = "neither_exists";
        rep.summary = "Neither exists; infimum entropy " + inf + " approached by P_n^E sequence";
        break;
    case EmmStatus::ArbitrageMarket:
        rep.verdict = "arbitrage";
        rep.summary = "Arbitrage market: no martingale measure";
        break;
    }
    if (res.status != EmmStatus::ArbitrageMarket) {
        rep.notes.push_back("The infimum of I_T(Q,P) is the same over locally equivalent, equivalent and absolutely "
                            "continuous martingale measures, and also over Levy-preserving ones: " + inf + " nats.");
        rep.notes.push_back("kappa0 minimises E[exp(k L_T)]; finding it is a one-step problem for the single "
                            "random variable L_T.");
    }
    if (market == MarketKind::Geometric) {
        rep.notes.push_back("For S = S0 exp(X) the MEMM is the Esscher EMM of the stochastic logarithm L; the "
                            "Esscher EMM for S is a different measure in general.");
        if (res.minimum) rep.notes.push_back("stochastic-logarithm minimiser kappa0 = " + fmt(res.minimum->kappa0));
    }
    if (!res.diagnostic.empty()) rep.notes.push_back(res.diagnostic);
    return rep;
}

} // namespace levy_emm
