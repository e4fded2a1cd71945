#pragma once

#include <functional>

namespace levy_emm {

struct QuadratureSettings {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    /// Refinement levels allowed per panel.
    int max_subdivisions = 15;
    /// Panel split radius; the truncation radius of h stays fixed at 1.
    double inner_cut = 1.0;
    /// Half-width of the window around 0 handled by Taylor expansion.
    double zero_window = 1e-8;

    /// Throws InvalidArgument on inconsistent settings.
    void validate() const;
};

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

using Integrand1D = std::function<double(double)>;

/// Double-exponential (tanh-sinh) quadrature on a finite panel; tolerates
/// integrable endpoint singularities. Throws QuadratureFailure when the
/// tolerance max(abs_tol, rel_tol * L1) is not met.
PanelResult integrate_panel(const Integrand1D& f, double a, double b, const QuadratureSettings& q);

/// exp-sinh quadrature on [a, +inf) for integrands with a convergent tail.
PanelResult integrate_half_line(const Integrand1D& f, double a, const QuadratureSettings& q);

} // namespace levy_emm
