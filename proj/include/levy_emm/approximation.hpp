#pragma once

#include "levy_emm/esscher.hpp"
#include "levy_emm/levy_measure.hpp"
#include "levy_emm/mgf_analysis.hpp"
#include "levy_emm/quadrature.hpp"
#include "levy_emm/triplet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levy_emm {

struct PenaltyCondition {
    bool pass = false;
    std::string detail;
    /// Point (and index) where the condition was seen to fail.
    std::optional<double> witness_x;
    std::optional<int> witness_n;
};

/// Checks on a penalty family against a measure:
///   (1) 0 <= rho_{n+1} <= rho_n and rho_n -> 0 pointwise, on a grid;
///   (2) |x| / rho_n(x) -> 0 as |x| -> inf, from the growth exponent and a
///       numerical ratio test;
///   (3) ∫ (1 - e^{-rho_1}) dν < inf, by quadrature (this bounds every n).
struct PenaltyDiagnostics {
    PenaltyCondition monotone;
    PenaltyCondition superlinear;
    PenaltyCondition integrable;
    bool all_pass() const { return monotone.pass && superlinear.pass && integrable.pass; }
};

PenaltyDiagnostics check_penalty(const PenaltyFamily& p, const LevyMeasure& nu, const QuadratureSettings& q = {});

/// (b, sigma^2, e^{-rho_n} ν). Throws PenaltyViolation when check_penalty
/// fails for this ν.
LevyTriplet perturbed_triplet(const LevyTriplet& t, const PenaltyFamily& p, int n, const QuadratureSettings& q = {});

/// ∫ (1 - e^{-rho_n(x)}) ν(dx)
double penalty_mass_gap(const LevyMeasure& nu, const PenaltyFamily& p, int n, const QuadratureSettings& q = {});

/// ∫ rho_n(x) e^{k x - rho_n(x)} ν(dx)
double penalty_tilted_moment(const LevyMeasure& nu, const PenaltyFamily& p, int n, double kappa,
                             const QuadratureSettings& q = {});

struct ApproxStep {
    int n = 0;
    double kappa_n = 0.0;
    /// I_T(P_n^E, P_n) = -T c_n(kappa_n)
    double entropy_n = 0.0;
    /// E_{P_n^E}[log Z^n_T]
    double correction_n = 0.0;
    /// I_T(P_n^E, P) = entropy_n + correction_n
    double entropy_vs_P = 0.0;
    /// ∫ (1 - e^{-rho_n}) dν
    double mass_gap = 0.0;
    /// Set when this step failed; the numeric fields are then NaN.
    std::optional<std::string> error;
};

struct ApproxTrace {
    std::vector<ApproxStep> steps;
    /// Minimizer of phi_T for the untempered triplet and -T c(kappa_limit).
    double kappa_limit = 0.0;
    double entropy_limit = 0.0;
    MinimumCase limit_kind = MinimumCase::InteriorRoot;
};

/// 1, 2, 4, ..., 2^k with 2^k <= n_max.
std::vector<int> default_schedule(int n_max);

/// Esscher parameters and entropies of the tempered markets P_n along the
/// schedule (strictly increasing, n >= 1). Steps run on `threads` workers
/// (0 means configured_threads()); the trace keeps schedule order.
/// Throws ArbitrageMarket for monotone triplets.
ApproxTrace approx_sequence(const LevyTriplet& t, double T, const PenaltyFamily& p, const std::vector<int>& schedule,
                            const QuadratureSettings& q = {}, const RootSettings& r = {}, int threads = 0);

} // namespace levy_emm
