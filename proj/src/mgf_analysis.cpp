#include "levy_emm/mgf_analysis.hpp"

#include "levy_emm/errors.hpp"
#include "levy_emm/levy_integral.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace levy_emm {

bool ExpMomentInterval::contains(double k) const {
    const ExtendedReal x(k);
    if (x == a) return a_in_I;
    if (x == b) return b_in_I;
    return a < x && x < b;
}

std::string ExpMomentInterval::describe() const {
    std::ostringstream os;
    os << (a_in_I ? "[" : "(") << a << ", " << b << (b_in_I ? "]" : ")");
    if (degenerate()) os.str(a_in_I ? "{0}" : "{}");
    return os.str();
}

namespace {

// Convergence of ∫ |x|^power e^{k x} over the tail on `side`.
bool tail_finite(const LevyMeasure& nu, Side side, double k, double power, const QuadratureSettings& q) {
    if (nu.tail(side).empty) return true;
    return levy_integral(nu, one_sided_tail_integrand(side, k, power), IntegralKind::Plain, q).is_finite();
}

ExtendedReal endpoint(const TailHint& t, int sign) {
    if (t.empty || std::isinf(t.rate)) return ExtendedReal::infinity(sign);
    return ExtendedReal(sign * t.rate);
}

} // namespace

ExpMomentInterval exp_moment_interval(const LevyTriplet& t, const QuadratureSettings& q) {
    ExpMomentInterval I;
    I.a = endpoint(t.nu.tail(Side::Left), -1);
    I.b = endpoint(t.nu.tail(Side::Right), +1);
    // E additionally needs ∫|x| e^{kx} ν finite on both tails; the tail away
    // from the endpoint matters only when a = b = 0.
    auto check = [&](const ExtendedReal& e, Side side, bool& in_I, bool& in_E) {
        if (!e.is_finite()) return;
        const double k = e.value();
        in_I = tail_finite(t.nu, side, k, 0.0, q);
        in_E = in_I && tail_finite(t.nu, side, k, 1.0, q);
    };
    check(I.a, Side::Left, I.a_in_I, I.a_in_E);
    check(I.b, Side::Right, I.b_in_I, I.b_in_E);
    if (I.degenerate()) {
        const bool in_I = I.a_in_I && I.b_in_I;
        const bool in_E = I.a_in_E && I.b_in_E;
        I.a_in_I = I.b_in_I = in_I;
        I.a_in_E = I.b_in_E = in_E;
    }
    return I;
}

const char* to_string(MinimumCase c) {
    switch (c) {
    case MinimumCase::InteriorRoot: return "InteriorRoot";
    case MinimumCase::LeftEndpoint: return "LeftEndpoint";
    case MinimumCase::RightEndpoint: return "RightEndpoint";
    case MinimumCase::DegenerateZero: break;
    }
    return "DegenerateZero";
}

const char* to_string(EsscherCase c) {
    switch (c) {
    case EsscherCase::IntervalInterior: return "IntervalInterior";
    case EsscherCase::RightEndpointClosed: return "RightEndpointClosed";
    case EsscherCase::LeftEndpointClosed: return "LeftEndpointClosed";
    case EsscherCase::BothEndpoints: return "BothEndpoints";
    case EsscherCase::DegenerateZeroMean: return "DegenerateZeroMean";
    case EsscherCase::None: break;
    }
    return "None";
}

namespace {

struct Bracket {
    double lo, hi, m_lo, m_hi;
};

std::string fmt_limit(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Walks from s towards the endpoint e (sign dir) until m changes sign to
// `want`. Bounded sides are approached by halving the remaining distance,
// unbounded sides by doubling the step.
std::optional<std::pair<double, double>> probe(const std::function<ExtendedReal(double)>& m, double s,
                                               const ExtendedReal& e, bool e_in_E, int dir, int want,
                                               const RootSettings& r, double first_step = 1.0) {
    if (e.is_finite()) {
        const double end = e.value();
        if (e_in_E) {
            const ExtendedReal me = m(end);
            if (me.is_finite() && me.value() * want >= 0) {
                // tighten towards s first, the endpoint value is the fallback
                for (int j = 1; j <= 8; ++j) {
                    const double k = end - (end - s) / std::ldexp(1.0, j);
                    const ExtendedReal mk = m(k);
                    if (mk.is_finite() && mk.value() * want > 0) return std::pair{k, mk.value()};
                }
                return std::pair{end, me.value()};
            }
            return std::nullopt;
        }
        for (int j = 1; j <= 60; ++j) {
            const double k = end - (end - s) / std::ldexp(1.0, j);
            if (k == end) break;
            const ExtendedReal mk = m(k);
            if (mk.is_finite() && mk.value() * want > 0) return std::pair{k, mk.value()};
        }
        return std::nullopt;
    }
    double step = first_step;
    for (double k = s + dir * step; std::abs(k) <= r.max_abs_kappa; step *= 2.0, k = s + dir * step) {
        const ExtendedReal mk = m(k);
        if (mk.is_finite() && mk.value() * want > 0) return std::pair{k, mk.value()};
        if (mk.is_infinite() && mk.sign() == want) break;
    }
    return std::nullopt;
}

} // namespace

MinimumPoint minimize_mgf(const LevyTriplet& t, double T, const QuadratureSettings& q, const RootSettings& r) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    if (is_monotone(t, q) != Monotonicity::NotMonotone)
        throw ArbitrageMarket("L is " + std::string(to_string(is_monotone(t, q))) + "; phi_T has no minimum");

    const ExpMomentInterval I = exp_moment_interval(t, q);
    auto phi_at = [&](double k) {
        // c(k0) <= c(0) = 0; clamp away quadrature noise of order abs_tol
        return std::min(1.0, std::exp(T * cumulant(t, k, q).value()));
    };
    if (I.degenerate()) return {0.0, MinimumCase::DegenerateZero, 1.0};

    auto m = [&](double k) { return cumulant_derivative(t, k, q); };

    // endpoint minima: psi(b) < 0 or psi(a) > 0
    if (I.b.is_finite() && I.b_in_E) {
        const ExtendedReal mb = m(I.b.value());
        if (mb < ExtendedReal(0.0)) return {I.b.value(), MinimumCase::RightEndpoint, phi_at(I.b.value())};
    }
    if (I.a.is_finite() && I.a_in_E) {
        const ExtendedReal ma = m(I.a.value());
        if (ma > ExtendedReal(0.0)) return {I.a.value(), MinimumCase::LeftEndpoint, phi_at(I.a.value())};
    }

    double s = 0.0;
    if (I.a == ExtendedReal(0.0)) s = I.b.is_finite() ? std::min(1.0, 0.5 * I.b.value()) : 1.0;
    if (I.b == ExtendedReal(0.0)) s = I.a.is_finite() ? std::max(-1.0, 0.5 * I.a.value()) : -1.0;
    const double ms = m(s).value();
    if (ms == 0.0) return {s, MinimumCase::InteriorRoot, phi_at(s)};

    // Newton distance as the first probe on unbounded sides; steep
    // tempered measures overflow far beyond the root.
    double step0 = 1.0;
    const ExtendedReal c2 = cumulant_second_derivative(t, s, q);
    if (c2.is_finite() && c2.value() > 0.0) step0 = std::clamp(std::abs(ms) / c2.value(), 1e-6, 1.0);

    Bracket br{s, s, ms, ms};
    if (ms < 0.0) {
        const auto hi = probe(m, s, I.b, I.b_in_E, +1, +1, r, step0);
        if (!hi) throw NoFiniteMinimizer("m(k) < 0 for every k >= " + std::to_string(s) + " in I = " + I.describe() +
                                          " (searched |k| <= " + fmt_limit(r.max_abs_kappa) + ")");
        br.hi = hi->first;
        br.m_hi = hi->second;
    } else {
        const auto lo = probe(m, s, I.a, I.a_in_E, -1, -1, r, step0);
        if (!lo) throw NoFiniteMinimizer("m(k) > 0 for every k <= " + std::to_string(s) + " in I = " + I.describe() +
                                          " (searched |k| <= " + fmt_limit(r.max_abs_kappa) + ")");
        br.lo = lo->first;
        br.m_lo = lo->second;
    }
    double k0;
    if (br.m_lo == 0.0) {
        k0 = br.lo;
    } else if (br.m_hi == 0.0) {
        k0 = br.hi;
    } else {
        std::uintmax_t iters = 200;
        auto f = [&](double k) { return m(k).value(); };
        auto tol = [&](double x, double y) { return std::abs(y - x) <= r.kappa_tol; };
        const auto [x, y] = boost::math::tools::toms748_solve(f, br.lo, br.hi, br.m_lo, br.m_hi, tol, iters);
        k0 = 0.5 * (x + y);
    }
    return {k0, MinimumCase::InteriorRoot, phi_at(k0)};
}

EsscherParameterStatus classify_esscher_parameter(const LevyTriplet& t, double T, const QuadratureSettings& q,
                                                  const RootSettings& r) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    EsscherParameterStatus st;
    st.interval = exp_moment_interval(t, q);
    const ExpMomentInterval& I = st.interval;

    const Monotonicity mono = is_monotone(t, q);
    if (mono != Monotonicity::NotMonotone) {
        st.diagnostic = std::string("L is ") + to_string(mono) + ": psi_T has constant sign";
        return st;
    }

    auto m = [&](double k) { return cumulant_derivative(t, k, q); };

    if (I.degenerate()) {
        if (!I.a_in_E) {
            st.diagnostic = "I = {0} and psi_T(0) = E[L_T] does not exist";
            return st;
        }
        ExtendedReal m0;
        try {
            m0 = m(0.0);
        } catch (const PsiUndefined& e) {
            st.diagnostic = e.what();
            return st;
        }
        if (m0.is_finite() && std::abs(m0.value()) <= r.m_tol) {
            st.exists = true;
            st.kind = EsscherCase::DegenerateZeroMean;
            st.kappa0 = 0.0;
        } else {
            st.diagnostic = "I = {0} and E[L_1] = " + m0.to_string() + " is not zero";
        }
        return st;
    }

    const bool left = I.a.is_finite() && I.a_in_E;
    const bool right = I.b.is_finite() && I.b_in_E;
    const ExtendedReal zero(0.0);
    if (!left && !right) {
        st.kind = EsscherCase::IntervalInterior;
    } else if (right && !left) {
        const ExtendedReal mb = m(I.b.value());
        if (mb >= zero) st.kind = EsscherCase::RightEndpointClosed;
        else st.diagnostic = "psi_T(b) < 0 at the closed right endpoint b = " + I.b.to_string();
    } else if (left && !right) {
        const ExtendedReal ma = m(I.a.value());
        if (ma <= zero) st.kind = EsscherCase::LeftEndpointClosed;
        else st.diagnostic = "psi_T(a) > 0 at the closed left endpoint a = " + I.a.to_string();
    } else {
        const ExtendedReal ma = m(I.a.value()), mb = m(I.b.value());
        if (ma <= zero && zero <= mb) st.kind = EsscherCase::BothEndpoints;
        else st.diagnostic = "psi_T does not change sign on E = [a, b] (psi(a) = " + ma.to_string() +
                             ", psi(b) = " + mb.to_string() + ")";
    }
    if (st.kind == EsscherCase::None) return st;
    st.exists = true;
    st.kappa0 = minimize_mgf(t, T, q, r).kappa0;
    return st;
}

} // namespace levy_emm
