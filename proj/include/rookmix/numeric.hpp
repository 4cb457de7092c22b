#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace rookmix {

using BigInt = mpz_class;
using Rational = mpq_class;

enum class NumericMode { exact, float64 };

std::string_view to_string(NumericMode mode);
NumericMode parse_mode(std::string_view text);

/// The two arithmetic modes every algorithm is instantiated for. Exact mode is
/// the oracle; float mode is the scalable path.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

template <Scalar T>
inline constexpr NumericMode mode_of_v = is_exact_v<T> ? NumericMode::exact : NumericMode::float64;

/// Converts an exact ratio into the requested mode. Both operands stay
/// arbitrary precision until this point.
template <Scalar T>
T ratio(const BigInt& num, const BigInt& den) {
  if constexpr (is_exact_v<T>) {
    Rational q(num, den);
    q.canonicalize();
    return q;
  } else {
    // Mantissa/exponent split avoids a gcd on huge operands and handles
    // quotients whose parts overflow a double.
    long num_exp = 0;
    long den_exp = 0;
    const double num_m = mpz_get_d_2exp(&num_exp, num.get_mpz_t());
    const double den_m = mpz_get_d_2exp(&den_exp, den.get_mpz_t());
    return std::ldexp(num_m / den_m, static_cast<int>(num_exp - den_exp));
  }
}

template <Scalar T>
T from_integer(const BigInt& value) {
  if constexpr (is_exact_v<T>) {
    return Rational(value);
  } else {
    return value.get_d();
  }
}

template <Scalar T>
T from_int(long long value) {
  if constexpr (is_exact_v<T>) {
    return Rational(static_cast<long>(value));
  } else {
    return static_cast<double>(value);
  }
}

/// Canonical num/den; gmpxx leaves two-argument constructions uncanonicalized.
inline Rational make_rational(long long num, long long den) {
  Rational q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline Rational abs_value(const Rational& q) { return abs(q); }
inline double abs_value(double x) { return std::abs(x); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

/// Exact values render as "p/q" (or "p"); doubles use the shortest
/// round-trip decimal form. Neither depends on the locale.
std::string format_scalar(const Rational& q);
std::string format_scalar(double x);

/// Parses "p/q", an integer, or a plain decimal such as "0.25" into an exact
/// rational. Throws domain_error on malformed input.
Rational parse_rational(std::string_view text);

BigInt binomial(unsigned long n, unsigned long k);
BigInt power(const BigInt& base, unsigned long exponent);

template <Scalar T>
T integer_power(const T& base, long long exponent) {
  T result = from_int<T>(1);
  T b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

}  // namespace rookmix
