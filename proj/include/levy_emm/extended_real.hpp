#pragma once

#include <cmath>
#include <iosfwd>
#include <string>

namespace levy_emm {

/// A value of the extended real line, plus an explicit "undefined" state for
/// expressions such as (+inf) + (-inf). Infinities are never encoded as
/// sentinel doubles at interfaces; use the named constructors.
class ExtendedReal {
public:
    enum class Kind { Finite, PosInf, NegInf, Undefined };

    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : kind_(classify(v)), value_(kind_ == Kind::Finite ? v : 0.0) {}

    static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::PosInf); }
    static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::NegInf); }
    static constexpr ExtendedReal undefined() { return ExtendedReal(Kind::Undefined); }
    static constexpr ExtendedReal infinity(int sign) { return sign >= 0 ? pos_inf() : neg_inf(); }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    constexpr bool is_infinite() const { return is_pos_inf() || is_neg_inf(); }
    constexpr bool is_undefined() const { return kind_ == Kind::Undefined; }

    /// Finite value; throws std::domain_error otherwise.
    double value() const;

    /// Lossy conversion for plotting/serialization: +-inf map to IEEE
    /// infinities, undefined maps to NaN.
    double to_double() const;

    /// -1, 0, +1; undefined has sign 0.
    int sign() const;

    std::string to_string() const;

    friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b);
    friend ExtendedReal operator-(ExtendedReal a);
    friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) { return a + (-b); }
    friend ExtendedReal operator*(double s, ExtendedReal a);
    friend ExtendedReal operator*(ExtendedReal a, double s) { return s * a; }
    ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }

    /// Equality is structural; undefined == undefined.
    friend bool operator==(ExtendedReal a, ExtendedReal b) {
        return a.kind_ == b.kind_ && a.value_ == b.value_;
    }

    /// Ordering on the extended line; comparisons involving undefined are false.
    friend bool operator<(ExtendedReal a, ExtendedReal b);
    friend bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }
    friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a < b || (a == b && !a.is_undefined()); }
    friend bool operator>=(ExtendedReal a, ExtendedReal b) { return b <= a; }

private:
    constexpr explicit ExtendedReal(Kind k) : kind_(k) {}

    static constexpr Kind classify(double v) {
        if (v != v) return Kind::Undefined;
        if (v == __builtin_huge_val()) return Kind::PosInf;
        if (v == -__builtin_huge_val()) return Kind::NegInf;
        return Kind::Finite;
    }

    Kind kind_ = Kind::Finite;
    double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtendedReal x);

/// exp on the extended line: exp(+inf) = +inf, exp(-inf) = 0. Finite
/// arguments whose exponential overflows yield +inf.
ExtendedReal exp(ExtendedReal x);

} // namespace levy_emm
