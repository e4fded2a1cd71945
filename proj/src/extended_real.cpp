#include "levy_emm/extended_real.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace levy_emm {

double ExtendedReal::value() const {
    if (kind_ != Kind::Finite) throw std::domain_error("ExtendedReal::value on " + to_string());
    return value_;
}

double ExtendedReal::to_double() const {
    switch (kind_) {
    case Kind::Finite: return value_;
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    case Kind::Undefined: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

int ExtendedReal::sign() const {
    switch (kind_) {
    case Kind::Finite: return (value_ > 0) - (value_ < 0);
    case Kind::PosInf: return 1;
    case Kind::NegInf: return -1;
    case Kind::Undefined: break;
    }
    return 0;
}

std::string ExtendedReal::to_string() const {
    switch (kind_) {
    case Kind::PosInf: return "+inf";
    case Kind::NegInf: return "-inf";
    case Kind::Undefined: return "undefined";
    case Kind::Finite: break;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
}

ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    using K = ExtendedReal::Kind;
    if (a.is_undefined() || b.is_undefined()) return ExtendedReal::undefined();
    if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ + b.value_);
    if (a.is_finite()) return b;
    if (b.is_finite()) return a;
    return a.kind_ == b.kind_ ? a : ExtendedReal(K::Undefined);
}

ExtendedReal operator-(ExtendedReal a) {
    switch (a.kind_) {
    case ExtendedReal::Kind::PosInf: return ExtendedReal::neg_inf();
    case ExtendedReal::Kind::NegInf: return ExtendedReal::pos_inf();
    case ExtendedReal::Kind::Undefined: return a;
    case ExtendedReal::Kind::Finite: break;
    }
    return ExtendedReal(-a.value_);
}

ExtendedReal operator*(double s, ExtendedReal a) {
    if (a.is_undefined() || std::isnan(s)) return ExtendedReal::undefined();
    if (a.is_finite()) return ExtendedReal(s * a.value_);
    // 0 * inf is taken as 0 (measure-theoretic convention).
    if (s == 0.0) return ExtendedReal(0.0);
    return ExtendedReal::infinity(s > 0 ? a.sign() : -a.sign());
}

bool operator<(ExtendedReal a, ExtendedReal b) {
    if (a.is_undefined() || b.is_undefined()) return false;
    if (a == b) return false;
    if (a.is_neg_inf() || b.is_pos_inf()) return true;
    if (a.is_pos_inf() || b.is_neg_inf()) return false;
    return a.value_ < b.value_;
}

std::ostream& operator<<(std::ostream& os, ExtendedReal x) { return os << x.to_string(); }

ExtendedReal exp(ExtendedReal x) {
    if (x.is_undefined()) return x;
    if (x.is_pos_inf()) return ExtendedReal::pos_inf();
    if (x.is_neg_inf()) return ExtendedReal(0.0);
    return ExtendedReal(std::exp(x.value()));
}

} // namespace levy_emm
