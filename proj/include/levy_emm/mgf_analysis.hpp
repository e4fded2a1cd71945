#pragma once

#include "levy_emm/extended_real.hpp"
#include "levy_emm/quadrature.hpp"
#include "levy_emm/triplet.hpp"

#include <optional>
#include <string>

namespace levy_emm {

/// I = {k : phi_T(k) < inf} with endpoints a <= 0 <= b, and the subset
/// E = {k : psi_T(k) finite}. I and E share their interior, so E is fixed by
/// the two endpoint flags.
struct ExpMomentInterval {
    ExtendedReal a;
    ExtendedReal b;
    bool a_in_I = false;
    bool b_in_I = false;
    bool a_in_E = false;
    bool b_in_E = false;

    bool degenerate() const { return a == ExtendedReal(0.0) && b == ExtendedReal(0.0); }
    /// Membership of k in I.
    bool contains(double k) const;
    std::string describe() const;
};

ExpMomentInterval exp_moment_interval(const LevyTriplet& t, const QuadratureSettings& q = {});

enum class MinimumCase { InteriorRoot, LeftEndpoint, RightEndpoint, DegenerateZero };
const char* to_string(MinimumCase c);

struct MinimumPoint {
    double kappa0 = 0.0;
    MinimumCase kind = MinimumCase::DegenerateZero;
    double phi_at_min = 1.0;
};

/// Root tolerances of the bracketed solver.
struct RootSettings {
    double kappa_tol = 1e-12;
    double m_tol = 1e-12;
    /// Brackets are grown by doubling up to this |k| before giving up.
    double max_abs_kappa = 1e8;
};

/// Unique minimiser of phi_T. Throws ArbitrageMarket for monotone L and
/// NoFiniteMinimizer when m keeps one sign on an unbounded descending side.
MinimumPoint minimize_mgf(const LevyTriplet& t, double T, const QuadratureSettings& q = {},
                          const RootSettings& r = {});

enum class EsscherCase {
    IntervalInterior,
    RightEndpointClosed,
    LeftEndpointClosed,
    BothEndpoints,
    DegenerateZeroMean,
    None
};
const char* to_string(EsscherCase c);

struct EsscherParameterStatus {
    bool exists = false;
    EsscherCase kind = EsscherCase::None;
    std::optional<double> kappa0;
    ExpMomentInterval interval;
    std::string diagnostic;
};

/// Decides whether psi_T has a zero, from the shape of E and the signs of
/// psi_T at the endpoints that belong to E.
EsscherParameterStatus classify_esscher_parameter(const LevyTriplet& t, double T, const QuadratureSettings& q = {},
                                                  const RootSettings& r = {});

} // namespace levy_emm
