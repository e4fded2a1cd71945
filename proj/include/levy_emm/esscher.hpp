#pragma once

#include "levy_emm/errors.hpp"
#include "levy_emm/mgf_analysis.hpp"
#include "levy_emm/quadrature.hpp"
#include "levy_emm/triplet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levy_emm {

/// Triplet of L under dP^k/dP = exp(k L_T) / phi_T(k). Parametric families
/// are mapped to their closed-form images; anything else is tilted.
/// Throws KappaOutsideI.
LevyTriplet esscher_transform(const LevyTriplet& t, double kappa, const QuadratureSettings& q = {});

/// I_T(P^k, P) = T (k m(k) - c(k)) in nats. Throws KappaOutsideI unless k is in
/// I with m(k) finite.
double esscher_entropy(const LevyTriplet& t, double T, double kappa, const QuadratureSettings& q = {});

enum class EmmStatus { EmmExists, PIsAlreadyEmm, NoEmm, ArbitrageMarket };
const char* to_string(EmmStatus s);

struct EsscherResult {
    EmmStatus status = EmmStatus::NoEmm;
    std::optional<double> kappa0;
    /// I_T(P^{k0}, P) when an Esscher martingale measure exists.
    std::optional<double> entropy;
    /// inf of I_T(Q, P) over martingale measures; absent for arbitrage markets.
    std::optional<double> infimum_entropy;
    std::optional<LevyTriplet> transformed;
    EsscherParameterStatus parameter_status;
    std::optional<MinimumPoint> minimum;
    std::string diagnostic;
};

/// Esscher martingale measure for the linear market (L, F).
EsscherResult solve_linear_emm(const LevyTriplet& t, double T, const QuadratureSettings& q = {},
                               const RootSettings& r = {});

/// Esscher martingale measure for S = S0 exp(X): the root of
/// c(k + 1) - c(k) = 0 over {k : k, k + 1 in I}. The infimum entropy is the
/// one of the stochastic logarithm, whose martingale measures are those of S.
EsscherResult solve_geometric_emm(const LevyTriplet& tX, double T, const QuadratureSettings& q = {},
                                  const RootSettings& r = {});

enum class MarketKind { Linear, Geometric };

struct MemmReport {
    MarketKind market = MarketKind::Linear;
    EsscherResult result;
    /// Short machine-readable code: "memm_equals_emm", "p_is_emm",
    /// "neither_exists", "arbitrage", "error".
    std::string verdict;
    std::string summary;
    std::vector<std::string> notes;
    /// Set when a solver error was caught.
    std::optional<std::string> error_name;
    std::optional<std::string> error_message;
    std::optional<ErrorCategory> error_category;
};

/// Runs the solver for the given market and wraps the outcome, including
/// solver errors, into a verdict.
MemmReport memm_report(const LevyTriplet& t, double T, MarketKind market = MarketKind::Linear,
                       const QuadratureSettings& q = {}, const RootSettings& r = {});

} // namespace levy_emm
