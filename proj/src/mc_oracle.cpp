#include "levy_emm/mc_oracle.hpp"

#include "levy_emm/approximation.hpp"
#include "levy_emm/errors.hpp"
#include "levy_emm/levy_integral.hpp"
#include "levy_emm/mgf_analysis.hpp"
#include "levy_emm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace levy_emm {

namespace {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) { return splitmix64(seed ^ splitmix64(block)); }

// uniform on (0, 1]
double unit_open_left(Rng& g) { return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(g); }

// Poisson stream of proposals; each draw returns the jump or nothing when
// thinned away. `threshold` is the size below which jumps are not produced
// (0 when the source covers the whole measure).
struct JumpSource {
    double rate = 0.0;
    std::function<std::optional<double>(Rng&)> draw;
    double threshold = 0.0;
};

JumpSource mixture(std::vector<JumpSource> parts) {
    parts.erase(std::remove_if(parts.begin(), parts.end(), [](const JumpSource& s) { return !(s.rate > 0); }),
                parts.end());
    JumpSource out;
    for (const auto& s : parts) {
        out.rate += s.rate;
        out.threshold = std::max(out.threshold, s.threshold);
    }
    if (parts.size() == 1) {
        out.draw = parts[0].draw;
        return out;
    }
    std::vector<double> w;
    for (const auto& s : parts) w.push_back(s.rate);
    out.draw = [parts, w](Rng& g) {
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        return parts[pick(g)].draw(g);
    };
    return out;
}

// C e^{-R x} x^{-1-Y} on x > eps, one side, by thinning Pareto or
// log-uniform/exponential envelopes.
JumpSource tempered_power_side(double C, double R, double Y, double eps, double sign) {
    if (Y > 0) {
        JumpSource s;
        s.rate = C * std::pow(eps, -Y) / Y;
        s.threshold = eps;
        s.draw = [=](Rng& g) -> std::optional<double> {
            const double x = eps * std::pow(unit_open_left(g), -1.0 / Y);
            if (R > 0 && unit_open_left(g) > std::exp(-R * x)) return std::nullopt;
            return sign * x;
        };
        return s;
    }
    if (Y != 0.0) throw UnsupportedMeasure("no sampler for tempered power index Y < 0");
    JumpSource inner, outer;
    inner.rate = eps < 1.0 ? C * std::log(1.0 / eps) : 0.0;
    inner.threshold = eps;
    inner.draw = [=](Rng& g) -> std::optional<double> {
        const double x = eps * std::pow(1.0 / eps, std::uniform_real_distribution<double>(0.0, 1.0)(g));
        if (unit_open_left(g) > std::exp(-R * x)) return std::nullopt;
        return sign * x;
    };
    const double start = std::max(1.0, eps);
    outer.rate = C * std::exp(-R * start) / R;
    outer.threshold = eps;
    outer.draw = [=](Rng& g) -> std::optional<double> {
        const double x = start + std::exponential_distribution<double>(R)(g);
        if (unit_open_left(g) > 1.0 / x) return std::nullopt;
        return sign * x;
    };
    return mixture({inner, outer});
}

JumpSource build_source(const LevyMeasure& nu, double eps) {
    return std::visit(
        [&](const auto& m) -> JumpSource {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, FiniteAtomic>) {
                JumpSource s;
                std::vector<double> xs, ws;
                for (const Atom& a : m.atoms) {
                    xs.push_back(a.x);
                    ws.push_back(a.mass);
                    s.rate += a.mass;
                }
                s.draw = [xs, ws](Rng& g) -> std::optional<double> {
                    std::discrete_distribution<std::size_t> pick(ws.begin(), ws.end());
                    return xs[pick(g)];
                };
                return s;
            } else if constexpr (std::is_same_v<M, JumpDiffusionDensity>) {
                JumpSource s;
                s.rate = m.intensity;
                if (const auto* gj = std::get_if<GaussianJumps>(&m.jumps)) {
                    const GaussianJumps j = *gj;
                    s.draw = [j](Rng& g) -> std::optional<double> {
                        return std::normal_distribution<double>(j.mean, j.stddev)(g);
                    };
                } else {
                    const auto j = std::get<DoubleExponentialJumps>(m.jumps);
                    s.draw = [j](Rng& g) -> std::optional<double> {
                        if (std::uniform_real_distribution<double>(0.0, 1.0)(g) < j.p)
                            return std::exponential_distribution<double>(j.eta_plus)(g);
                        return -std::exponential_distribution<double>(j.eta_minus)(g);
                    };
                }
                return s;
            } else if constexpr (std::is_same_v<M, VarianceGamma>) {
                return mixture({tempered_power_side(m.C, m.M, 0.0, eps, 1.0), tempered_power_side(m.C, m.G, 0.0, eps, -1.0)});
            } else if constexpr (std::is_same_v<M, CGMY>) {
                return mixture({tempered_power_side(m.C, m.M, m.Y, eps, 1.0), tempered_power_side(m.C, m.G, m.Y, eps, -1.0)});
            } else if constexpr (std::is_same_v<M, SymmetricAlphaStable>) {
                return mixture({tempered_power_side(m.scale, 0.0, m.alpha, eps, 1.0),
                                tempered_power_side(m.scale, 0.0, m.alpha, eps, -1.0)});
            } else if constexpr (std::is_same_v<M, Tempered>) {
                if (m.weight.tilt != 0.0) throw UnsupportedMeasure("no sampler for exponentially tilted measures");
                JumpSource s = build_source(*m.base, eps);
                if (m.weight.penalty) {
                    const auto pen = *m.weight.penalty;
                    auto base = s.draw;
                    s.draw = [base, pen](Rng& g) -> std::optional<double> {
                        const auto x = base(g);
                        if (!x) return x;
                        if (unit_open_left(g) > std::exp(-pen.family.rho(pen.n, *x))) return std::nullopt;
                        return x;
                    };
                }
                return s;
            } else if constexpr (std::is_same_v<M, Pushforward>) {
                // sample the base past a smaller cutoff whose image covers |y| > eps
                const bool to_linear = m.map == PushforwardMap::ExpMinusOne;
                const double eps_base = to_linear ? std::log1p(eps) : -std::expm1(-eps);
                JumpSource s = build_source(*m.base, eps_base);
                const bool cut = s.threshold > 0;
                auto base = s.draw;
                s.draw = [base, to_linear, cut, eps](Rng& g) -> std::optional<double> {
                    const auto x = base(g);
                    if (!x) return x;
                    const double y = to_linear ? std::expm1(*x) : std::log1p(*x);
                    if (cut && std::abs(y) <= eps) return std::nullopt;
                    return y;
                };
                if (cut) s.threshold = eps;
                return s;
            } else {
                throw UnsupportedMeasure("no sampler for " + nu.describe());
            }
        },
        nu.variant());
}

// ∫ h dν over the part of ν simulated by the source
double simulated_truncated_mean(const LevyMeasure& nu, double threshold, const QuadratureSettings& q) {
    if (!nu.has_density()) {
        double s = 0.0;
        for (const Atom& a : nu.atom_list())
            if (std::abs(a.x) > threshold) s += a.mass * truncation(a.x);
        return s;
    }
    auto id = [](double x) { return x; };
    if (threshold <= 0.0) return levy_integral_range(nu, id, -1.0, 1.0, q);
    if (threshold >= 1.0) return 0.0;
    return levy_integral_range(nu, id, threshold, 1.0, q) + levy_integral_range(nu, id, -1.0, -threshold, q);
}

void require_weights(double ess) {
    if (!(ess >= 10.0))
        throw DegenerateWeights("effective sample size " + std::to_string(ess) + " of the importance weights is below 10");
}

// Weights e^{k L_i} scaled to sample mean 1, plus log of the unscaled mean.
struct Weights {
    std::vector<double> w;
    double log_mean = 0.0;
    double ess = 0.0;
};

Weights weights(const SamplePack& pack, double kappa) {
    const auto& v = pack.values;
    if (v.empty()) throw InvalidArgument("empty sample pack");
    Weights out;
    out.w.resize(v.size());
    double mx = -kInf;
    for (double x : v) mx = std::max(mx, kappa * x);
    if (!std::isfinite(mx)) throw DegenerateWeights("non-finite exponent in importance weights");
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.w[i] = std::exp(kappa * v[i] - mx);
        sum += out.w[i];
    }
    const double n = static_cast<double>(v.size());
    for (double& w : out.w) {
        w *= n / sum;
        sum2 += w * w;
    }
    out.log_mean = mx + std::log(sum / n);
    out.ess = n * n / sum2;
    return out;
}

double se_of_influence(const std::vector<double>& psi) {
    const double n = static_cast<double>(psi.size());
    if (psi.size() < 2) return 0.0;
    double mean = 0.0;
    for (double p : psi) mean += p;
    mean /= n;
    double ss = 0.0;
    for (double p : psi) ss += (p - mean) * (p - mean);
    return std::sqrt(ss / (n - 1.0) / n);
}

} // namespace

const char* to_string(SmallJumpMode m) { return m == SmallJumpMode::Drop ? "Drop" : "GaussianApprox"; }

void SimConfig::validate() const {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
    if (!(epsilon > 0 && epsilon <= 1)) throw InvalidArgument("epsilon must lie in (0, 1]");
    if (threads < 0) throw InvalidArgument("threads must be >= 0");
}

SamplePack sample_terminal(const LevyTriplet& t, const SimConfig& cfg, const QuadratureSettings& q) {
    cfg.validate();
    validate_triplet(t, q);
    const JumpSource src = build_source(t.nu, cfg.epsilon);
    if (src.rate > 0 && !std::isfinite(src.rate)) throw UnsupportedMeasure("jump intensity above the cutoff is infinite");

    SamplePack pack;
    pack.config = cfg;
    pack.jump_threshold = src.threshold;
    pack.small_jump_variance = src.threshold > 0 ? t.nu.window_moment(2, src.threshold) : 0.0;
    const double T = cfg.T;
    const double drift = (t.b - simulated_truncated_mean(t.nu, src.threshold, q)) * T;
    const double sd_w = std::sqrt(t.sigma2 * T);
    const bool gauss_small = cfg.small_jump_mode == SmallJumpMode::GaussianApprox && pack.small_jump_variance > 0;
    const double sd_small = std::sqrt(pack.small_jump_variance * T);

    const std::size_t N = static_cast<std::size_t>(cfg.n_samples);
    pack.values.resize(N);
    if (cfg.record_jumps) pack.jump_records.emplace(N);
    const std::size_t blocks = (N + kSampleBlock - 1) / kSampleBlock;
    auto run_block = [&](std::size_t b) {
        Rng g(block_seed(cfg.seed, b));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::poisson_distribution<long long> count(src.rate * T);
        std::uniform_real_distribution<double> when(0.0, T);
        const std::size_t end = std::min(N, (b + 1) * static_cast<std::size_t>(kSampleBlock));
        for (std::size_t i = b * kSampleBlock; i < end; ++i) {
            double x = drift;
            if (sd_w > 0) x += sd_w * normal(g);
            if (gauss_small) x += sd_small * normal(g);
            if (src.rate > 0) {
                const long long k = count(g);
                for (long long j = 0; j < k; ++j) {
                    const auto jump = src.draw(g);
                    if (!jump) continue;
                    x += *jump;
                    if (pack.jump_records) (*pack.jump_records)[i].push_back({when(g), *jump});
                }
            }
            pack.values[i] = x;
        }
    };
    parallel_for(blocks, cfg.threads > 0 ? cfg.threads : configured_threads(), run_block);
    if (pack.jump_records)
        for (auto& rec : *pack.jump_records)
            std::sort(rec.begin(), rec.end(), [](const JumpRecord& a, const JumpRecord& b) { return a.time < b.time; });
    return pack;
}

Estimate martingale_defect(const SamplePack& pack, double kappa) {
    const Weights W = weights(pack, kappa);
    require_weights(W.ess);
    const auto& v = pack.values;
    double mu = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mu += W.w[i] * v[i];
    mu /= static_cast<double>(v.size());
    std::vector<double> psi(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) psi[i] = W.w[i] * (v[i] - mu);
    return {mu, se_of_influence(psi), W.ess};
}

Estimate entropy_estimate(const SamplePack& pack, double kappa, const LevyTriplet& t, double T,
                          const QuadratureSettings& q) {
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    if (!exp_moment_interval(t, q).contains(kappa))
        throw KappaOutsideI("kappa = " + std::to_string(kappa) + " is outside I");
    if (kappa == 0.0) return {0.0, 0.0, static_cast<double>(pack.values.size())};
    const Weights W = weights(pack, kappa);
    require_weights(W.ess);
    const auto& v = pack.values;
    double mu = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mu += W.w[i] * v[i];
    mu /= static_cast<double>(v.size());
    // E[Z log Z] = k E_w[L] - log mean(e^{kL}); influence of each path on both terms
    std::vector<double> psi(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) psi[i] = kappa * W.w[i] * (v[i] - mu) - (W.w[i] - 1.0);
    return {kappa * mu - W.log_mean, se_of_influence(psi), W.ess};
}

Estimate cumulant_estimate(const SamplePack& pack, double kappa) {
    const Weights W = weights(pack, kappa);
    const double T = pack.config.T;
    std::vector<double> psi(W.w.begin(), W.w.end());
    return {W.log_mean / T, se_of_influence(psi) / T, W.ess};
}

PathwiseZn pathwise_log_zn(const SamplePack& pack, const PenaltyFamily& p, int n, const LevyMeasure& nu, double T,
                           const QuadratureSettings& q) {
    if (!pack.jump_records) throw MissingJumpRecords("sample pack was drawn without jump records");
    if (pack.jump_threshold > 1.0) throw MissingJumpRecords("jumps above 1 in size were not all recorded");
    if (!(T > 0)) throw InvalidArgument("horizon T must be positive");
    if (n < 1) throw InvalidArgument("penalty index n must be >= 1");
    const double gap_n = penalty_mass_gap(nu, p, n, q);
    const double gap_1 = penalty_mass_gap(nu, p, 1, q);

    PathwiseZn out;
    const auto& recs = *pack.jump_records;
    out.log_zn.resize(recs.size());
    std::vector<double> z(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        double s = 0.0;
        for (const JumpRecord& r : recs[i]) s += p.rho(n, r.size);
        out.log_zn[i] = -s + T * gap_n;
        z[i] = std::exp(out.log_zn[i]);
    }
    double sum = 0.0;
    for (double v : z) sum += v;
    out.mean_zn = z.empty() ? 0.0 : sum / static_cast<double>(z.size());
    out.se_zn = se_of_influence(z);
    out.max_zn = z.empty() ? 0.0 : *std::max_element(z.begin(), z.end());
    out.bound = std::exp(T * gap_1);
    out.bound_holds = out.max_zn <= out.bound * (1.0 + 1e-12);
    return out;
}

} // namespace levy_emm
