#pragma once

#include "levy_emm/levy_measure.hpp"
#include "levy_emm/quadrature.hpp"
#include "levy_emm/triplet.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levy_emm {

enum class SmallJumpMode { GaussianApprox, Drop };
const char* to_string(SmallJumpMode m);

struct SimConfig {
    double T = 1.0;
    long long n_samples = 100000;
    /// Jumps with |x| <= epsilon of infinite-activity measures are replaced
    /// per small_jump_mode; finite-activity parts are always simulated exactly.
    double epsilon = 0.01;
    std::uint64_t seed = 0;
    SmallJumpMode small_jump_mode = SmallJumpMode::GaussianApprox;
    bool record_jumps = false;
    /// Worker threads; 0 means configured_threads().
    int threads = 0;

    /// Throws InvalidArgument.
    void validate() const;
};

struct JumpRecord {
    double time;
    double size;
};

struct SamplePack {
    std::vector<double> values;
    /// Per path, every simulated jump (all jumps larger than epsilon in size).
    std::optional<std::vector<std::vector<JumpRecord>>> jump_records;
    SimConfig config;
    /// Threshold below which jumps were approximated; 0 if all were simulated.
    double jump_threshold = 0.0;
    /// Variance per unit time of the replaced small jumps.
    double small_jump_variance = 0.0;
    /// Generator description, stored in reports.
    std::string rng = "mt19937_64 per block of 4096 paths, seeded by splitmix64(seed, block)";
};

/// Paths per independently seeded block; results do not depend on threads.
inline constexpr long long kSampleBlock = 4096;

/// i.i.d. draws of L_T. Throws UnsupportedMeasure for measures without a
/// sampler (generic densities, tilted tempered measures).
SamplePack sample_terminal(const LevyTriplet& t, const SimConfig& cfg, const QuadratureSettings& q = {});

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    /// Effective sample size of the importance weights.
    double ess = 0.0;
};

/// Self-normalized estimate of E[L_T e^{k L_T}] / E[e^{k L_T}], the mean of
/// L_T under the Esscher measure. Throws DegenerateWeights when ESS < 10.
Estimate martingale_defect(const SamplePack& pack, double kappa);

/// E[Z log Z] with Z = e^{k L_T} / (sample mean of e^{k L_T}), in nats.
/// Throws KappaOutsideI if k is not in I for t, DegenerateWeights when ESS < 10.
Estimate entropy_estimate(const SamplePack& pack, double kappa, const LevyTriplet& t, double T,
                          const QuadratureSettings& q = {});

/// log of the sample mean of e^{k L_T}, divided by T, with a delta-method
/// standard error.
Estimate cumulant_estimate(const SamplePack& pack, double kappa);

struct PathwiseZn {
    std::vector<double> log_zn;
    double mean_zn = 0.0;
    double se_zn = 0.0;
    double max_zn = 0.0;
    /// exp(T ∫ (1 - e^{-rho_1}) dν), a bound for Z^n_t for every n and t.
    double bound = 0.0;
    bool bound_holds = true;
};

/// log Z^n_T = -sum rho_n(jumps) + T ∫ (1 - e^{-rho_n}) dν per path.
/// Throws MissingJumpRecords if the pack carries no jump records or its
/// threshold exceeds 1.
PathwiseZn pathwise_log_zn(const SamplePack& pack, const PenaltyFamily& p, int n, const LevyMeasure& nu, double T,
                           const QuadratureSettings& q = {});

} // namespace levy_emm
