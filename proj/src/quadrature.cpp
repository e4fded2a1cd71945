#include "levy_emm/quadrature.hpp"

#include "levy_emm/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>

namespace levy_emm {

void QuadratureSettings::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw InvalidArgument("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw InvalidArgument("max_subdivisions must be >= 1");
    if (!(zero_window > 0) || !(zero_window < inner_cut)) throw InvalidArgument("need 0 < zero_window < inner_cut");
    if (!(inner_cut > 0)) throw InvalidArgument("inner_cut must be positive");
}

namespace {

// Integrator tables are immutable once built; cache one per thread and level.
template <class Integrator>
Integrator& cached_integrator(int levels) {
    thread_local std::map<int, std::unique_ptr<Integrator>> cache;
    auto& slot = cache[levels];
    if (!slot) slot = std::make_unique<Integrator>(static_cast<std::size_t>(levels));
    return *slot;
}

// The reported error is the gap between the last two refinement levels. Both
// schemes gain digits quadratically per level, so the error of the final level
// is about error^2 / L1; that projection is what gets compared to the target.
void check(const PanelResult& r, const QuadratureSettings& q, double a, double b) {
    const double target = std::max(q.abs_tol, q.rel_tol * r.l1);
    const double projected = r.l1 > 0 ? r.error * r.error / r.l1 : r.error;
    if (!std::isfinite(r.value) || std::min(r.error, projected) > target) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "panel [%.6g, %.6g]: value %.6g, error %.3g > tolerance %.3g", a, b,
                      r.value, r.error, target);
        throw QuadratureFailure(buf);
    }
}

} // namespace

PanelResult integrate_panel(const Integrand1D& f, double a, double b, const QuadratureSettings& q) {
    PanelResult r;
    if (!(b > a)) return r;
    auto& integrator = cached_integrator<boost::math::quadrature::tanh_sinh<double>>(q.max_subdivisions);
    std::size_t levels = 0;
    try {
        r.value = integrator.integrate(f, a, b, q.rel_tol, &r.error, &r.l1, &levels);
    } catch (const LevyError&) {
        throw;
    } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("tanh-sinh: ") + e.what());
    }
    check(r, q, a, b);
    return r;
}

PanelResult integrate_half_line(const Integrand1D& f, double a, const QuadratureSettings& q) {
    PanelResult r;
    // exp-sinh tables beyond ~9 levels buy nothing in double precision.
    const int levels_cap = std::min(q.max_subdivisions, 9);
    auto& integrator = cached_integrator<boost::math::quadrature::exp_sinh<double>>(levels_cap);
    std::size_t levels = 0;
    try {
        r.value = integrator.integrate(f, a, std::numeric_limits<double>::infinity(), q.rel_tol, &r.error,
                                       &r.l1, &levels);
    } catch (const LevyError&) {
        throw;
    } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("exp-sinh: ") + e.what());
    }
    check(r, q, a, std::numeric_limits<double>::infinity());
    return r;
}

} // namespace levy_emm
