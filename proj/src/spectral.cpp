#include "rookmix/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "rookmix/rng.hpp"

namespace rookmix {

namespace {

template <Scalar T>
bool close_enough(const T& a, const T& b) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b));
  }
}

template <Scalar T>
T random_value(SplitMix64& rng) {
  if constexpr (is_exact_v<T>) {
    const long long num = static_cast<long long>(rng.below(41)) - 20;
    const long long den = static_cast<long long>(rng.below(20)) + 1;
    return make_rational(num, den);
  } else {
    return 2.0 * rng.uniform() - 1.0;
  }
}

}  // namespace

template <Scalar T>
std::vector<T> eigenvalues(const ChainParams& params) {
  std::vector<T> out;
  out.reserve(params.d() + 1);
  for (int m = 0; m <= params.d(); ++m) {
    if constexpr (is_exact_v<T>) {
      out.push_back(Rational(1) - make_rational(static_cast<long long>(m) * params.n(), params.degree()));
    } else {
      out.push_back(1.0 - static_cast<double>(m) * params.n() / static_cast<double>(params.degree()));
    }
  }
  return out;
}

template <Scalar T>
T pi_inner(std::span<const T> f, std::span<const T> g, std::span<const T> pi) {
  if (f.size() != pi.size() || g.size() != pi.size()) throw domain_error("pi_inner: length mismatch");
  T sum = from_int<T>(0);
  for (std::size_t i = 0; i < pi.size(); ++i) sum += f[i] * g[i] * pi[i];
  return sum;
}

template <Scalar T>
SpectralData<T>::SpectralData(std::shared_ptr<const KrawtchoukTable<T>> table, std::vector<T> eigenvalues,
                              std::vector<T> pi, std::vector<T> norm_sq)
    : table_(std::move(table)),
      eigenvalues_(std::move(eigenvalues)),
      pi_(std::move(pi)),
      norm_sq_(std::move(norm_sq)) {}

template <Scalar T>
T SpectralData<T>::phi_product(int m, int x, int y) const {
  return table_->normalized(m, x) * table_->normalized(m, y) / norm_sq_[m];
}

template <Scalar T>
T SpectralData<T>::gram_signed_square(int m, int j) const {
  const T g = pi_inner<T>(table_->normalized_row(m), table_->normalized_row(j), pi_);
  T sq = g * g / (norm_sq_[m] * norm_sq_[j]);
  if (g < 0) sq = -sq;
  return sq;
}

template <Scalar T>
double SpectralData<T>::phi(int m, int x) const {
  return to_double(table_->normalized(m, x)) / std::sqrt(to_double(norm_sq_[m]));
}

template <Scalar T>
SpectralData<T> orthonormalize(const ChainParams& params, std::shared_ptr<const KrawtchoukTable<T>> table) {
  if (!(table->params() == params)) throw domain_error("orthonormalize: table built for different parameters");
  const auto pi = stationary_lumped<T>(params);
  std::vector<T> pi_w(pi.weights().begin(), pi.weights().end());
  std::vector<T> norm_sq;
  norm_sq.reserve(params.d() + 1);
  for (int m = 0; m <= params.d(); ++m) {
    auto row = table->normalized_row(m);
    norm_sq.push_back(pi_inner<T>(row, row, pi_w));
  }
  return SpectralData<T>(std::move(table), eigenvalues<T>(params), std::move(pi_w), std::move(norm_sq));
}

template <Scalar T>
SpectralData<T> build_spectral(const ChainParams& params) {
  return orthonormalize<T>(params, cached_krawtchouk_table<T>(params));
}

template <Scalar T>
T eigen_residual(const ChainParams& params, int m) {
  if (m < 0 || m > params.d()) throw domain_error("eigen_residual: m out of range");
  const auto table = cached_krawtchouk_table<T>(params);
  const auto kernel = build_kernel<T>(params);
  const auto lambda = eigenvalues<T>(params)[m];
  auto row = table->normalized_row(m);
  const auto image = kernel.apply(row);
  T worst = from_int<T>(0);
  T scale = from_int<T>(0);
  for (int x = 0; x <= params.d(); ++x) {
    worst = std::max(worst, T(abs_value(T(image[x] - lambda * row[x]))));
    scale = std::max(scale, T(abs_value(row[x])));
  }
  return worst / scale;
}

template <Scalar T>
T self_adjoint_check(const ChainParams& params, int trials, std::uint64_t seed) {
  const auto kernel = build_kernel<T>(params);
  const auto pi_dist = stationary_lumped<T>(params);
  const auto pi = pi_dist.weights();
  const int len = params.d() + 1;
  T worst = from_int<T>(0);
  for (int trial = 0; trial < trials; ++trial) {
    auto rng = substream(seed, static_cast<std::uint64_t>(trial));
    std::vector<T> f(len), g(len);
    for (int i = 0; i < len; ++i) f[i] = random_value<T>(rng);
    for (int i = 0; i < len; ++i) g[i] = random_value<T>(rng);
    const auto pf = kernel.apply(f);
    const auto pg = kernel.apply(g);
    const T lhs = pi_inner<T>(pf, g, pi);
    const T rhs = pi_inner<T>(f, pg, pi);
    worst = std::max(worst, T(abs_value(T(lhs - rhs))));
  }
  return worst;
}

template <Scalar T>
std::vector<L2Identity<T>> l2_identity_series(const ChainParams& params, long long t_max) {
  if (t_max < 0) throw domain_error("t must be >= 0");
  const auto spectral = build_spectral<T>(params);
  const auto& lambda = spectral.eigenvalues();
  const int d = params.d();
  std::vector<T> sq_powers(d + 1, from_int<T>(1));  // λ_m^{2t}
  std::vector<T> phi0(d + 1);
  for (int m = 0; m <= d; ++m) phi0[m] = spectral.phi0_sq(m);

  LumpedEvolution<T> evo(params);
  const auto pi = evo.stationary().weights();
  std::vector<L2Identity<T>> out;
  out.reserve(t_max + 1);
  for (long long t = 0; t <= t_max; ++t) {
    if (t > 0) {
      evo.advance();
      for (int m = 0; m <= d; ++m) sq_powers[m] *= T(lambda[m] * lambda[m]);
    }
    const auto p = evo.current().weights();
    L2Identity<T> row{t, from_int<T>(0), from_int<T>(0), from_int<T>(0)};
    for (int y = 0; y <= d; ++y) {
      if (is_zero(pi[y])) continue;  // float underflow only; then p[y] is negligible too
      const T diff = p[y] - pi[y];
      row.lhs += diff * diff / pi[y];
    }
    for (int m = 1; m <= d; ++m) row.rhs += phi0[m] * sq_powers[m];
    const T tv = evo.distance();
    row.four_tv_sq = 4 * tv * tv;
    row.equal = close_enough(row.lhs, row.rhs);
    if constexpr (is_exact_v<T>) {
      row.dominates_tv = row.four_tv_sq <= row.lhs;
    } else {
      row.dominates_tv = row.four_tv_sq <= row.lhs * (1 + 1e-12) + 1e-300;
    }
    out.push_back(std::move(row));
  }
  return out;
}

template <Scalar T>
L2Identity<T> l2_identity_check(const ChainParams& params, long long t) {
  return l2_identity_series<T>(params, t).back();
}

template std::vector<Rational> eigenvalues<Rational>(const ChainParams&);
template std::vector<double> eigenvalues<double>(const ChainParams&);
template Rational pi_inner<Rational>(std::span<const Rational>, std::span<const Rational>, std::span<const Rational>);
template double pi_inner<double>(std::span<const double>, std::span<const double>, std::span<const double>);
template class SpectralData<Rational>;
template class SpectralData<double>;
template SpectralData<Rational> orthonormalize<Rational>(const ChainParams&,
                                                         std::shared_ptr<const KrawtchoukTable<Rational>>);
template SpectralData<double> orthonormalize<double>(const ChainParams&, std::shared_ptr<const KrawtchoukTable<double>>);
template SpectralData<Rational> build_spectral<Rational>(const ChainParams&);
template SpectralData<double> build_spectral<double>(const ChainParams&);
template Rational eigen_residual<Rational>(const ChainParams&, int);
template double eigen_residual<double>(const ChainParams&, int);
template Rational self_adjoint_check<Rational>(const ChainParams&, int, std::uint64_t);
template double self_adjoint_check<double>(const ChainParams&, int, std::uint64_t);
template std::vector<L2Identity<Rational>> l2_identity_series<Rational>(const ChainParams&, long long);
template std::vector<L2Identity<double>> l2_identity_series<double>(const ChainParams&, long long);
template L2Identity<Rational> l2_identity_check<Rational>(const ChainParams&, long long);
template L2Identity<double> l2_identity_check<double>(const ChainParams&, long long);

}  // namespace rookmix
