#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levy_emm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Truncation function h(x) = x 1{|x| <= 1}. Every drift in this library is
/// relative to it.
inline double truncation(double x) { return (x >= -1.0 && x <= 1.0) ? x : 0.0; }

enum class Side { Left, Right };

/// Asymptotics of a Lévy density on one tail (|x| > 1):
///   density(x) ~ |x|^-power * log(|x|)^-log_power * exp(-rate |x|).
/// rate = +inf means faster than any exponential; `empty` means no mass at all.
struct TailHint {
    bool empty = false;
    double rate = 0.0;
    double power = 0.0;
    double log_power = 0.0;

    static TailHint none() { return {true, kInf, 0.0, 0.0}; }
    static TailHint super_exponential() { return {false, kInf, 0.0, 0.0}; }
    static TailHint exponential(double rate, double power = 0.0) { return {false, rate, power, 0.0}; }
    static TailHint polynomial(double power, double log_power = 0.0) { return {false, 0.0, power, log_power}; }
};

/// Whether ∫_{tail} |x|^k e^{s x} ν(dx) is finite on the given side, where the
/// integrand grows like |x|^k e^{s x}. s = -inf denotes an integrand that is
/// eventually negligible.
bool tail_integral_finite(const TailHint& tail, Side side, double exp_rate, double power);

/// Penalty functions rho_n(x) >= 0 used to temper the heavy tails of ν.
class PenaltyFamily {
public:
    enum class Kind { DefaultQuadratic, Custom };

    /// rho_n(x) = x^2/n for |x| > 1, 0 otherwise.
    static PenaltyFamily default_quadratic();

    /// rho_n(x) = |x|^exponent/n for |x| > 1, 0 otherwise.
    static PenaltyFamily power(double exponent);

    /// Arbitrary family. `tail_power`/`tail_coefficient` describe the growth
    /// rho_n(x) ~ tail_coefficient(n) |x|^tail_power used for tail hints;
    /// `inner_radius` is a radius on which rho_n vanishes identically (0 if none).
    static PenaltyFamily custom(std::string name, std::function<double(int, double)> rho,
                                double tail_power, std::function<double(int)> tail_coefficient,
                                double inner_radius = 0.0);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double rho(int n, double x) const { return rho_(n, x); }
    double tail_power() const { return tail_power_; }
    double tail_coefficient(int n) const { return tail_coefficient_(n); }
    double inner_radius() const { return inner_radius_; }
    /// Exponent for the `power` family; nullopt for arbitrary custom families.
    std::optional<double> power_exponent() const { return power_exponent_; }

private:
    Kind kind_ = Kind::DefaultQuadratic;
    std::string name_;
    std::function<double(int, double)> rho_;
    double tail_power_ = 2.0;
    std::function<double(int)> tail_coefficient_;
    double inner_radius_ = 1.0;
    std::optional<double> power_exponent_;
};

class LevyMeasure;

struct Atom {
    double x;
    double mass;
};

struct FiniteAtomic {
    std::vector<Atom> atoms;
};

struct GaussianJumps {
    double mean;
    double stddev;
};

struct DoubleExponentialJumps {
    double p;         // probability of an upward jump
    double eta_plus;  // rate of upward jumps
    double eta_minus; // rate of downward jumps
};

struct JumpDiffusionDensity {
    double intensity;
    std::variant<GaussianJumps, DoubleExponentialJumps> jumps;
};

struct VarianceGamma {
    double C, G, M;
};

struct CGMY {
    double C, G, M, Y;
};

/// Density scale * |x|^(-alpha-1).
struct SymmetricAlphaStable {
    double alpha;
    double scale;
};

/// Multiplicative weight exp(-rho_n(x) + tilt * x).
struct TemperingWeight {
    struct Penalty {
        PenaltyFamily family;
        int n;
    };
    std::optional<Penalty> penalty;
    double tilt = 0.0;

    double log_weight(double x) const;
};

struct Tempered {
    std::shared_ptr<const LevyMeasure> base;
    TemperingWeight weight;
};

/// Image of a measure under x -> e^x - 1 (log-price jumps to stochastic-log
/// jumps) or under y -> log(1 + y) (the inverse).
enum class PushforwardMap { ExpMinusOne, LogOnePlus };

struct Pushforward {
    std::shared_ptr<const LevyMeasure> base;
    PushforwardMap map;
};

struct GenericDensity {
    std::function<double(double)> density;
    /// Optional log of the density; keeps far-tail values from underflowing.
    std::function<double(double)> log_density;
    TailHint left;
    TailHint right;
    /// Density ~ |x|^(-1-activity_index) near 0; negative for finite activity.
    double activity_index;
    std::string label = "generic";
    std::optional<double> lower_support;
    std::optional<double> upper_support;
    std::vector<double> breakpoints;
};

/// A Lévy measure ν on R \ {0}. Immutable value type; copies share structure.
class LevyMeasure {
public:
    using Variant = std::variant<FiniteAtomic, JumpDiffusionDensity, VarianceGamma, CGMY,
                                 SymmetricAlphaStable, Tempered, Pushforward, GenericDensity>;

    LevyMeasure() : rep_(FiniteAtomic{}) {}
    explicit LevyMeasure(Variant v);

    static LevyMeasure none() { return LevyMeasure(); }
    static LevyMeasure atoms(std::vector<Atom> atoms);
    static LevyMeasure gaussian_jumps(double intensity, double mean, double stddev);
    static LevyMeasure double_exponential_jumps(double intensity, double p, double eta_plus, double eta_minus);
    static LevyMeasure variance_gamma(double C, double G, double M);
    static LevyMeasure cgmy(double C, double G, double M, double Y);
    static LevyMeasure symmetric_stable(double alpha, double scale = 1.0);
    static LevyMeasure tempered(const LevyMeasure& base, TemperingWeight weight);
    static LevyMeasure pushforward(const LevyMeasure& base, PushforwardMap map);
    static LevyMeasure generic(GenericDensity g);

    const Variant& variant() const { return rep_; }
    bool is_zero() const;
    std::string describe() const;

    /// Point masses (exact, summed directly by integrals).
    std::vector<Atom> atom_list() const;
    bool has_density() const;
    /// log of the absolutely continuous part; -inf where it vanishes.
    double log_density(double x) const;
    double density(double x) const;
    /// log density(x) + s x, with exponential factors combined before they
    /// are applied so that e^{s x} against an e^{-s|x|} tail cancels exactly.
    double log_density_tilted(double x, double s) const;

    TailHint tail(Side side) const;
    /// Blumenthal–Getoor style index of the density near 0; < 0 means finite
    /// activity (bounded density or no density).
    double activity_index() const;
    bool has_mass_on(Side side) const;
    /// Density support boundaries in addition to 0 and +-1.
    std::vector<double> breakpoints() const;
    std::optional<double> support_lower() const;

    /// ∫_{0<|x|<w} x^k density(x) dx; exact for stable densities, quadrature otherwise.
    double window_moment(int k, double w) const;

private:
    Variant rep_;
};

} // namespace levy_emm
