#include "rookmix/numeric.hpp"

#include <array>
#include <charconv>
#include <system_error>

#include "rookmix/errors.hpp"

namespace rookmix {

std::string_view to_string(NumericMode mode) {
  return mode == NumericMode::exact ? "exact" : "float";
}

NumericMode parse_mode(std::string_view text) {
  if (text == "exact") return NumericMode::exact;
  if (text == "float") return NumericMode::float64;
  throw domain_error("unknown numeric mode '" + std::string(text) + "' (expected exact|float)");
}

std::string format_scalar(const Rational& q) { return q.get_str(); }

std::string format_scalar(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw domain_error("cannot format value");
  return std::string(buf.data(), end);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw domain_error("malformed number");
  BigInt v(std::string(s), 10);
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      BigInt num = parse_integer(text.substr(0, slash));
      BigInt den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw domain_error("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      bool negative = !whole.empty() && whole.front() == '-';
      if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
      if (whole.empty() && frac.empty()) throw domain_error("malformed number");
      if (!whole.empty() && !all_digits(whole)) throw domain_error("malformed number");
      if (!frac.empty() && !all_digits(frac)) throw domain_error("malformed number");
      BigInt num(std::string(whole) + std::string(frac), 10);
      Rational q(num, power(BigInt(10), frac.size()));
      q.canonicalize();
      return negative ? Rational(-q) : q;
    }
    return Rational(parse_integer(text));
  } catch (const domain_error&) {
    throw domain_error("cannot parse '" + std::string(text) + "' as a rational number");
  }
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt result;
  if (k > n) return BigInt(0);
  mpz_bin_uiui(result.get_mpz_t(), n, k);
  return result;
}

BigInt power(const BigInt& base, unsigned long exponent) {
  BigInt result;
  mpz_pow_ui(result.get_mpz_t(), base.get_mpz_t(), exponent);
  return result;
}

}  // namespace rookmix
