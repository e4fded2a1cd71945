#pragma once

// Independent reference computations for the test suites. Nothing here goes
// through the library's quadrature engine.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// ∫_lo^hi f(x) dx for 0 < lo < hi, Simpson in t = log x (for integrands with
/// power-law behaviour at 0 or infinity).
inline double simpson_log(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
    return simpson([&](double t) { const double x = std::exp(t); return f(x) * x; }, std::log(lo), std::log(hi), n);
}

/// Plain bisection on a sign change; used to cross-check root solvers.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

/// Cumulant of (b, s2, lambda * N(mu, sd^2)) with truncation h = x 1{|x|<=1}.
inline double merton_cumulant(double b, double s2, double lambda, double mu, double sd, double k) {
    const double lo = (-1.0 - mu) / sd, hi = (1.0 - mu) / sd;
    const double eh = mu * (norm_cdf(hi) - norm_cdf(lo)) + sd * (norm_pdf(lo) - norm_pdf(hi));
    return b * k + 0.5 * s2 * k * k + lambda * (std::exp(k * mu + 0.5 * k * k * sd * sd) - 1.0) - k * lambda * eh;
}

/// Cumulant of (b, s2, lambda * DoubleExponential(p, ep, em)).
inline double kou_cumulant(double b, double s2, double lambda, double p, double ep, double em, double k) {
    const double eh_pos = p * (1.0 - std::exp(-ep) * (1.0 + ep)) / ep;
    const double eh_neg = -(1.0 - p) * (1.0 - std::exp(-em) * (1.0 + em)) / em;
    return b * k + 0.5 * s2 * k * k + lambda * (p * ep / (ep - k) + (1.0 - p) * em / (em + k) - 1.0) -
           k * lambda * (eh_pos + eh_neg);
}

/// Derivative of kou_cumulant in k.
inline double kou_cumulant_derivative(double b, double s2, double lambda, double p, double ep, double em, double k) {
    const double eh_pos = p * (1.0 - std::exp(-ep) * (1.0 + ep)) / ep;
    const double eh_neg = -(1.0 - p) * (1.0 - std::exp(-em) * (1.0 + em)) / em;
    return b + s2 * k + lambda * (p * ep / ((ep - k) * (ep - k)) - (1.0 - p) * em / ((em + k) * (em + k))) -
           lambda * (eh_pos + eh_neg);
}

/// Cumulant of (b, s2, VG(C, G, M)).
inline double vg_cumulant(double b, double s2, double C, double G, double M, double k) {
    const double h_part = C * ((1.0 - std::exp(-M)) / M - (1.0 - std::exp(-G)) / G);
    return b * k + 0.5 * s2 * k * k - C * std::log((M - k) * (G + k) / (M * G)) - k * h_part;
}

/// Cumulant of (b, s2, CGMY) for Y != 1: closed form for the fully compensated
/// part plus a Simpson evaluation of ∫_{|x|>1} x ν(dx).
inline double cgmy_cumulant(double b, double s2, double C, double G, double M, double Y, double k) {
    const double g = std::tgamma(-Y);
    const double full = C * g *
                        (std::pow(M - k, Y) - std::pow(M, Y) + std::pow(G + k, Y) - std::pow(G, Y) +
                         k * Y * (std::pow(M, Y - 1.0) - std::pow(G, Y - 1.0)));
    auto right = [&](double x) { return x * C * std::exp(-M * x) * std::pow(x, -1.0 - Y); };
    auto left = [&](double x) { return x * C * std::exp(-G * x) * std::pow(x, -1.0 - Y); };
    const double outer = simpson(right, 1.0, 1.0 + 60.0 / M, 200000) - simpson(left, 1.0, 1.0 + 60.0 / G, 200000);
    return b * k + 0.5 * s2 * k * k + full + k * outer;
}

} // namespace oracle
