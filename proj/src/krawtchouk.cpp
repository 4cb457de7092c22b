#include "rookmix/krawtchouk.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

namespace rookmix {

namespace {

void check_index(int m, int x, const ChainParams& params) {
  if (m < 0 || m > params.d()) {
    throw domain_error("Krawtchouk degree m = " + std::to_string(m) + " outside 0.." + std::to_string(params.d()));
  }
  if (x < 0 || x > params.d()) {
    throw domain_error("shell x = " + std::to_string(x) + " outside 0.." + std::to_string(params.d()));
  }
}

// A pivot that is exactly zero is replaced by a tiny value of the same role;
// the twist selection keeps such pivots off the propagation path in practice.
double guard_pivot(double v) {
  constexpr double tiny = 1e-300;
  return v == 0.0 ? tiny : v;
}

std::vector<double> twisted_column(int x, const ChainParams& params) {
  const int d = params.d();
  const double s = params.n();
  std::vector<double> a(d + 1), b(d + 1), c(d + 1);
  for (int m = 0; m <= d; ++m) {
    a[m] = static_cast<double>(d - m) * (s - 1.0);
    b[m] = a[m] + m - s * x;
    c[m] = m;
  }
  std::vector<double> fwd(d + 1), bwd(d + 1);
  fwd[0] = b[0];
  for (int k = 1; k <= d; ++k) fwd[k] = b[k] - c[k] * a[k - 1] / guard_pivot(fwd[k - 1]);
  bwd[d] = b[d];
  for (int k = d - 1; k >= 0; --k) bwd[k] = b[k] - a[k] * c[k + 1] / guard_pivot(bwd[k + 1]);

  int twist = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= d; ++k) {
    const double gamma = std::abs(fwd[k] + bwd[k] - b[k]);
    if (gamma < best) {
      best = gamma;
      twist = k;
    }
  }

  // K_m has exact zeros at some integer shells. The ratio form cannot carry
  // the solution across one, so a step whose neighbour is (nearly) zero uses
  // the three-term relation instead; there the two terms do not cancel.
  std::vector<double> z(d + 1, 0.0);
  z[twist] = 1.0;
  for (int j = twist - 1; j >= 0; --j) {
    if (j + 2 <= twist && std::abs(b[j + 1] * z[j + 1]) <= 0.5 * std::abs(a[j + 1] * z[j + 2])) {
      z[j] = (b[j + 1] * z[j + 1] - a[j + 1] * z[j + 2]) / c[j + 1];
    } else {
      z[j] = a[j] * z[j + 1] / guard_pivot(fwd[j]);
    }
  }
  for (int j = twist + 1; j <= d; ++j) {
    if (j - 2 >= twist && std::abs(b[j - 1] * z[j - 1]) <= 0.5 * std::abs(c[j - 1] * z[j - 2])) {
      z[j] = (b[j - 1] * z[j - 1] - c[j - 1] * z[j - 2]) / a[j - 1];
    } else {
      z[j] = c[j] * z[j - 1] / guard_pivot(bwd[j]);
    }
  }
  const double scale = z[0];
  for (double& v : z) v /= scale;
  return z;
}

std::vector<Rational> forward_column(int x, const ChainParams& params) {
  const int d = params.d();
  const long long s = params.n();
  std::vector<Rational> r(d + 1);
  r[0] = 1;
  if (d >= 1) r[1] = Rational(1) - make_rational(s * x, static_cast<long long>(d) * (s - 1));
  for (int m = 1; m < d; ++m) {
    const long long lead = static_cast<long long>(d - m) * (s - 1);
    Rational next = Rational(static_cast<long>(lead + m - s * x)) * r[m] - Rational(m) * r[m - 1];
    next /= Rational(static_cast<long>(lead));
    r[m + 1] = next;
  }
  return r;
}

}  // namespace

template <Scalar T>
T generalized_binom(const T& x, unsigned j) {
  T result = from_int<T>(1);
  for (unsigned i = 0; i < j; ++i) {
    result *= T(x - from_int<T>(i));
    result /= from_int<T>(i + 1);
  }
  return result;
}

template <Scalar T>
T krawtchouk_direct(int m, const T& x, const ChainParams& params) {
  if (m < 0 || m > params.d()) throw domain_error("Krawtchouk degree out of range");
  const T s_minus_1 = from_int<T>(params.n() - 1);
  const T rest = from_int<T>(params.d()) - x;
  T sum = from_int<T>(0);
  for (int j = 0; j <= m; ++j) {
    T term = generalized_binom(x, j) * generalized_binom(rest, m - j) * integer_power(s_minus_1, m - j);
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

template <Scalar T>
std::vector<T> krawtchouk_recurrence_column(int x, const ChainParams& params) {
  check_index(0, x, params);
  if constexpr (is_exact_v<T>) {
    return forward_column(x, params);
  } else {
    return twisted_column(x, params);
  }
}

template <Scalar T>
T krawtchouk_eval(int m, int x, const ChainParams& params) {
  check_index(m, x, params);
  if constexpr (is_exact_v<T>) {
    return krawtchouk_direct<T>(m, from_int<T>(x), params);
  } else {
    const auto column = twisted_column(x, params);
    return ratio<double>(shell_size(params, m), BigInt(1)) * column[m];
  }
}

template <Scalar T>
T weighted_inner(std::span<const T> a, std::span<const T> b, const ChainParams& params) {
  const std::size_t len = params.d() + 1;
  if (a.size() != len || b.size() != len) throw domain_error("weighted_inner: vectors must have length d+1");
  const auto weights = shell_sizes(params);
  T sum = from_int<T>(0);
  for (std::size_t i = 0; i < len; ++i) sum += ratio<T>(weights[i], BigInt(1)) * a[i] * b[i];
  return sum;
}

template <Scalar T>
std::vector<T> KrawtchoukTable<T>::row(int m) const {
  std::vector<T> out;
  out.reserve(params_.d() + 1);
  for (int x = 0; x <= params_.d(); ++x) out.push_back(value(m, x));
  return out;
}

template <Scalar T>
KrawtchoukTable<T> KrawtchoukTable<T>::build(const ChainParams& params) {
  const int d = params.d();
  const std::size_t width = d + 1;
  std::vector<T> normalized(width * width);
  std::vector<T> endpoint;
  endpoint.reserve(width);
  const auto phi = shell_sizes(params);
  for (const BigInt& v : phi) endpoint.push_back(ratio<T>(v, BigInt(1)));

  if constexpr (is_exact_v<T>) {
    // Direct alternating sum; for integer x the falling-factorial binomials are
    // ordinary binomials, so they come from one Pascal triangle.
    std::vector<std::vector<BigInt>> pascal(width);
    for (int a = 0; a <= d; ++a) {
      pascal[a].assign(a + 1, BigInt(1));
      for (int k = 1; k < a; ++k) pascal[a][k] = pascal[a - 1][k - 1] + pascal[a - 1][k];
    }
    auto choose = [&](int a, int k) -> const BigInt& {
      static const BigInt zero(0);
      return (k < 0 || k > a) ? zero : pascal[a][k];
    };
    std::vector<BigInt> spow(width);
    spow[0] = 1;
    for (int k = 1; k <= d; ++k) spow[k] = spow[k - 1] * (params.n() - 1);

    for (int x = 0; x <= d; ++x) {
      for (int m = 0; m <= d; ++m) {
        BigInt sum = 0;
        for (int j = 0; j <= std::min(m, x); ++j) {
          BigInt term = choose(x, j) * choose(d - x, m - j) * spow[m - j];
          if (j % 2 == 0) {
            sum += term;
          } else {
            sum -= term;
          }
        }
        normalized[m * width + x] = Rational(sum, phi[m]);
        normalized[m * width + x].canonicalize();
      }
    }
  } else {
    for (int x = 0; x <= d; ++x) {
      const auto column = twisted_column(x, params);
      for (int m = 0; m <= d; ++m) normalized[m * width + x] = column[m];
    }
  }
  return KrawtchoukTable(params, std::move(normalized), std::move(endpoint));
}

template <Scalar T>
std::shared_ptr<const KrawtchoukTable<T>> cached_krawtchouk_table(const ChainParams& params) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const KrawtchoukTable<T>>> cache;
  const auto key = std::make_pair(params.n(), params.d());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const KrawtchoukTable<T>>(KrawtchoukTable<T>::build(params));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

template Rational generalized_binom<Rational>(const Rational&, unsigned);
template double generalized_binom<double>(const double&, unsigned);
template Rational krawtchouk_direct<Rational>(int, const Rational&, const ChainParams&);
template double krawtchouk_direct<double>(int, const double&, const ChainParams&);
template Rational krawtchouk_eval<Rational>(int, int, const ChainParams&);
template double krawtchouk_eval<double>(int, int, const ChainParams&);
template std::vector<Rational> krawtchouk_recurrence_column<Rational>(int, const ChainParams&);
template std::vector<double> krawtchouk_recurrence_column<double>(int, const ChainParams&);
template Rational weighted_inner<Rational>(std::span<const Rational>, std::span<const Rational>, const ChainParams&);
template double weighted_inner<double>(std::span<const double>, std::span<const double>, const ChainParams&);
template class KrawtchoukTable<Rational>;
template class KrawtchoukTable<double>;
template std::shared_ptr<const KrawtchoukTable<Rational>> cached_krawtchouk_table<Rational>(const ChainParams&);
template std::shared_ptr<const KrawtchoukTable<double>> cached_krawtchouk_table<double>(const ChainParams&);

}  // namespace rookmix
