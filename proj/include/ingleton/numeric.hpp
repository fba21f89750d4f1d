#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace ingleton {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Floor of the square root of a non-negative integer.
inline Integer isqrt(const Integer& n) {
    if (n < 0) throw std::domain_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Integer& n, Integer* root = nullptr) {
    if (n < 0) return false;
    Integer r = isqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

/// Parses "num/den" or "num"; the result is normalized, so non-canonical
/// inputs like "4/198" are accepted and reduced.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer num(s.substr(0, slash));
        Integer den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

inline std::string rational_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline int sign_of(const Integer& n) { return n > 0 ? 1 : (n < 0 ? -1 : 0); }
inline int sign_of(const Rational& r) { return sign_of(numerator(r)); }

}  // namespace ingleton
