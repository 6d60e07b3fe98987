#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <concepts>
#include <string_view>
#include <type_traits>

namespace wavecert {

namespace mp = boost::multiprecision;

/// Exact rational arithmetic (GMP mpq).
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
/// Binary floating point with a significand of at least 256 bits (MPFR).
using Real256 = mp::number<mp::mpfr_float_backend<78>, mp::et_off>;

static_assert(std::numeric_limits<Real256>::digits >= 256);

/// Arithmetic mode a field was computed in.
enum class Precision {
    working64,        ///< IEEE-754 binary64, round to nearest at every operation
    oracle_rational,  ///< exact rationals
    oracle_mp256,     ///< >= 256-bit significand
};

inline std::string_view to_string(Precision p) {
    switch (p) {
    case Precision::working64: return "working64";
    case Precision::oracle_rational: return "rational";
    case Precision::oracle_mp256: return "mp256";
    }
    return "unknown";
}

template <typename T>
struct number_traits;

template <>
struct number_traits<double> {
    static constexpr Precision precision = Precision::working64;
    static double from_double(double x) { return x; }
    static double to_double(double x) { return x; }
    static Real256 to_real256(double x) { return Real256(x); }
    static double abs(double x) { return std::fabs(x); }
    static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct number_traits<Rational> {
    static constexpr Precision precision = Precision::oracle_rational;
    // mpq_set_d is exact for finite doubles.
    static Rational from_double(double x) { return Rational(x); }
    // mpq_get_d truncates, go through MPFR to get round-to-nearest.
    static double to_double(const Rational& x) { return static_cast<double>(Real256(x)); }
    static Real256 to_real256(const Rational& x) { return Real256(x); }
    static Rational abs(const Rational& x) { return mp::abs(x); }
    static bool is_zero(const Rational& x) { return x.sign() == 0; }
};

template <>
struct number_traits<Real256> {
    static constexpr Precision precision = Precision::oracle_mp256;
    static Real256 from_double(double x) { return Real256(x); }
    static double to_double(const Real256& x) { return static_cast<double>(x); }
    static Real256 to_real256(const Real256& x) { return x; }
    static Real256 abs(const Real256& x) { return mp::abs(x); }
    static bool is_zero(const Real256& x) { return x.is_zero(); }
};

/// Number domains the scheme and the error analysis are instantiated on.
template <typename T>
concept SchemeNumber = requires(const T& a, const T& b, double d) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a / b } -> std::convertible_to<T>;
    { a < b } -> std::convertible_to<bool>;
    { number_traits<T>::from_double(d) } -> std::convertible_to<T>;
    { number_traits<T>::to_double(a) } -> std::convertible_to<double>;
};

template <SchemeNumber T>
T from_double(double x) { return number_traits<T>::from_double(x); }

template <SchemeNumber T>
double to_double(const T& x) { return number_traits<T>::to_double(x); }

template <SchemeNumber T>
Real256 to_real256(const T& x) { return number_traits<T>::to_real256(x); }

template <SchemeNumber T>
T abs_value(const T& x) { return number_traits<T>::abs(x); }

template <SchemeNumber T>
constexpr Precision precision_of() { return number_traits<T>::precision; }

/// 2^e as a double, exact for the exponents used in round-off bounds.
inline double pow2(int e) { return std::ldexp(1.0, e); }

}  // namespace wavecert
