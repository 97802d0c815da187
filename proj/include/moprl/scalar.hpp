#ifndef MOPRL_SCALAR_HPP
#define MOPRL_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <optional>
#include <string>

#include "moprl/errors.hpp"

namespace moprl {

namespace mp = boost::multiprecision;

// Two scalar backends drive every pipeline stage:
//   Rational — exact arbitrary-size rational arithmetic,
//   BigFloat — binary float at a configurable precision (default 128 bits).
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using BigFloat = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

namespace detail {
inline unsigned& float_bits_ref() {
  static unsigned bits = 128;
  return bits;
}
}  // namespace detail

inline unsigned float_precision_bits() { return detail::float_bits_ref(); }

// Sets the working precision for all BigFloat values created afterwards.
inline void set_float_precision_bits(unsigned bits) {
  if (bits < 24) throw DomainError("float precision below 24 bits");
  detail::float_bits_ref() = bits;
  const unsigned digits10 = static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
  BigFloat::default_precision(digits10);
}

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static std::string name() { return "rational"; }
  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational pivot_floor() { return Rational(0); }
};

template <>
struct ScalarTraits<BigFloat> {
  static constexpr bool is_exact = false;
  static std::string name() { return "float"; }
  static BigFloat from_rational(const Rational& q) { return BigFloat(q); }
  static double to_double(const BigFloat& v) { return v.convert_to<double>(); }
  // Relative floor under which a pivot is indistinguishable from
  // elimination roundoff: 32 guard bits above working precision. Callers
  // scale it by the magnitude of the data. Hankel-type pivots decay fast
  // but legitimately; an absolute floor would reject valid windows.
  static BigFloat pivot_floor() {
    return pow(BigFloat(2), 32 - static_cast<long>(float_precision_bits()));
  }
};

// Exact x^(num/den) on the rational backend; nullopt when the result is
// irrational (endpoint roots that are not perfect powers).
inline std::optional<Rational> exact_pow(const Rational& x, const Rational& e) {
  const Integer en = numerator(e);
  const Integer ed = denominator(e);
  if (x == 0) {
    if (e > 0) return Rational(0);
    if (e == 0) return Rational(1);
    throw DomainError("0 raised to a negative power");
  }
  Rational base = x;
  if (ed != 1) {
    if (x < 0) return std::nullopt;
    Integer num = numerator(x), den = denominator(x);
    const unsigned long d = ed.convert_to<unsigned long>();
    Integer rn, rd;
    const int exact_n = mpz_root(rn.backend().data(), num.backend().data(), d);
    const int exact_d = mpz_root(rd.backend().data(), den.backend().data(), d);
    if (!exact_n || !exact_d) return std::nullopt;
    base = Rational(rn) / Rational(rd);
  }
  const long p = en.convert_to<long>();
  Rational r(1);
  Rational b = p < 0 ? Rational(1) / base : base;
  for (long k = 0; k < (p < 0 ? -p : p); ++k) r *= b;
  return r;
}

// x^e for the active backend. Rational: exact or ExactValueUnavailable.
inline Rational scalar_pow(const Rational& x, const Rational& e) {
  auto r = exact_pow(x, e);
  if (!r) throw ExactValueUnavailable("irrational power on the rational backend");
  return *r;
}

inline BigFloat scalar_pow(const BigFloat& x, const Rational& e) {
  if (denominator(e) == 1) {
    const long p = numerator(e).convert_to<long>();
    if (x == 0 && p < 0) throw DomainError("0 raised to a negative power");
    return pow(x, p);
  }
  if (x < 0) throw DomainError("fractional power of a negative value");
  if (x == 0) {
    if (e > 0) return BigFloat(0);
    throw DomainError("0 raised to a non-positive fractional power");
  }
  return pow(x, BigFloat(e));
}

inline Rational scalar_exp(const Rational& x) {
  if (x == 0) return Rational(1);
  throw ExactValueUnavailable("exp of a nonzero value on the rational backend");
}

inline BigFloat scalar_exp(const BigFloat& x) { return exp(x); }

template <class T>
T abs_value(const T& v) {
  return v < 0 ? T(-v) : v;
}

// Decimal rendering used by the exporters; deterministic for a fixed
// precision and digit count.
inline std::string decimal_string(const BigFloat& v, int digits) {
  return v.str(digits, std::ios_base::scientific);
}

inline std::string decimal_string(const Rational& v, int digits) {
  const unsigned save = BigFloat::default_precision();
  BigFloat::default_precision(static_cast<unsigned>(digits) + 12);
  std::string s = BigFloat(v).str(digits, std::ios_base::scientific);
  BigFloat::default_precision(save);
  return s;
}

inline std::string exact_string(const Rational& v) {
  std::string s = numerator(v).str();
  if (denominator(v) != 1) s += "/" + denominator(v).str();
  return s;
}

inline std::string exact_string(const BigFloat& v) {
  return v.str(0, std::ios_base::scientific);
}

}  // namespace moprl

#endif
