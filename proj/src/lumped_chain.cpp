#include "rookmix/lumped_chain.hpp"

#include <algorithm>

#include "rookmix/spectral.hpp"

namespace rookmix {

template <Scalar T>
T TridiagonalKernel<T>::entry(int x, int y) const {
  if (y == x) return stay[x];
  if (y == x + 1) return up[x];
  if (y == x - 1) return down[x];
  return from_int<T>(0);
}

template <Scalar T>
std::vector<T> TridiagonalKernel<T>::apply(std::span<const T> f) const {
  const int d = params.d();
  if (f.size() != static_cast<std::size_t>(d + 1)) throw domain_error("kernel apply: function has wrong length");
  std::vector<T> out(d + 1);
  for (int x = 0; x <= d; ++x) {
    T v = stay[x] * f[x];
    if (x < d) v += up[x] * f[x + 1];
    if (x > 0) v += down[x] * f[x - 1];
    out[x] = v;
  }
  return out;
}

template <Scalar T>
TridiagonalKernel<T> build_kernel(const ChainParams& params) {
  const int d = params.d();
  const BigInt deg(std::to_string(params.degree()));
  TridiagonalKernel<T> k{params, {}, {}, {}};
  k.up.reserve(d + 1);
  k.down.reserve(d + 1);
  k.stay.reserve(d + 1);
  for (int x = 0; x <= d; ++x) {
    k.up.push_back(ratio<T>(BigInt(d - x), BigInt(d)));
    k.down.push_back(ratio<T>(BigInt(x), deg));
    k.stay.push_back(ratio<T>(BigInt(x) * (params.n() - 2), deg));
  }
  return k;
}

template <Scalar T>
ShellDistribution<T> step(const ShellDistribution<T>& dist, const TridiagonalKernel<T>& kernel) {
  const int d = kernel.params.d();
  auto w = dist.weights();
  std::vector<T> out(d + 1);
  for (int y = 0; y <= d; ++y) {
    T v = w[y] * kernel.stay[y];
    if (y > 0) v += w[y - 1] * kernel.up[y - 1];
    if (y < d) v += w[y + 1] * kernel.down[y + 1];
    out[y] = v;
  }
  return ShellDistribution<T>(trusted, dist.params(), std::move(out));
}

template <Scalar T>
LumpedEvolution<T>::LumpedEvolution(const ChainParams& params)
    : LumpedEvolution(build_kernel<T>(params), ShellDistribution<T>::point_mass(params, 0)) {}

template <Scalar T>
LumpedEvolution<T>::LumpedEvolution(TridiagonalKernel<T> kernel, ShellDistribution<T> start)
    : kernel_(std::move(kernel)),
      stationary_(stationary_lumped<T>(kernel_.params)),
      current_(std::move(start)) {}

template <Scalar T>
void LumpedEvolution<T>::advance() {
  current_ = step(current_, kernel_);
  ++time_;
}

namespace {

// Exact evolution in scaled integers. With D = d(n-1) every P* entry is an
// integer over D, so M_t = n^d D^t P*^t(0,.) and Φ_t = D^t φ stay integral and
// d(t) = Σ|M_t - Φ_t| / (2 n^d D^t). No gcd is ever taken.
class ScaledExactEvolution {
 public:
  explicit ScaledExactEvolution(const ChainParams& params)
      : params_(params), target_(shell_sizes(params)), current_(params.d() + 1, 0), scale_(1) {
    current_[0] = power(BigInt(params.n()), static_cast<unsigned long>(params.d()));
    scale_ = current_[0];
    next_.resize(params.d() + 1);
  }

  void advance() {
    const int d = params_.d();
    const long n = params_.n();
    for (int y = 0; y <= d; ++y) {
      BigInt& v = next_[y];
      v = current_[y] * static_cast<unsigned long>(y * (n - 2));
      if (y > 0) v += current_[y - 1] * static_cast<unsigned long>((d - y + 1) * (n - 1));
      if (y < d) v += current_[y + 1] * static_cast<unsigned long>(y + 1);
    }
    std::swap(current_, next_);
    const auto deg = static_cast<unsigned long>(params_.degree());
    for (auto& v : target_) v *= deg;
    scale_ *= deg;
    ++time_;
  }

  long long time() const { return time_; }

  // 2 n^d D^t d(t).
  BigInt scaled_gap() const {
    BigInt sum = 0;
    BigInt diff;
    for (std::size_t y = 0; y < current_.size(); ++y) {
      diff = current_[y] - target_[y];
      sum += abs(diff);
    }
    return sum;
  }

  bool within(const BigInt& gap, const Rational& eps) const {
    // gap / (2 scale) <= p/q  <=>  q gap <= 2 p scale
    return eps.get_den() * gap <= 2 * eps.get_num() * scale_;
  }

  Rational distance() const {
    Rational q(scaled_gap(), 2 * scale_);
    q.canonicalize();
    return q;
  }

 private:
  ChainParams params_;
  std::vector<BigInt> target_;
  std::vector<BigInt> current_;
  std::vector<BigInt> next_;
  BigInt scale_;  // n^d D^t
  long long time_ = 0;
};

template <Scalar T>
void check_thresholds(std::span<const T> eps) {
  for (const T& e : eps) {
    if (!(e > 0 && e < 1)) throw domain_error("eps must lie in (0,1), got " + format_scalar(e));
  }
}

// Forward scan with a doubling horizon. `record(out)` stamps the current time
// into every still-unset slot whose threshold has been reached.
template <class Evolution, class Record>
std::vector<long long> scan(Evolution& evo, std::size_t count, Record record, const MixingTimeOptions& options) {
  std::vector<long long> out(count, -1);
  long long horizon = std::min(std::max<long long>(1, options.initial_horizon), options.max_horizon);
  while (true) {
    while (true) {
      record(out);
      if (std::count(out.begin(), out.end(), -1LL) == 0) return out;
      if (evo.time() >= horizon) break;
      evo.advance();
    }
    if (horizon >= options.max_horizon) {
      throw resource_error("mixing time exceeds horizon " + std::to_string(options.max_horizon) + " steps");
    }
    horizon = std::min(horizon * 2, options.max_horizon);
  }
}

}  // namespace

template <Scalar T>
TVCurve<T> tv_curve(const ChainParams& params, long long t_max) {
  if (t_max < 0) throw domain_error("t_max must be >= 0");
  if constexpr (is_exact_v<T>) {
    ScaledExactEvolution evo(params);
    TVCurve<T> curve{params, {}};
    curve.values.reserve(t_max + 1);
    curve.values.push_back(evo.distance());
    for (long long t = 1; t <= t_max; ++t) {
      evo.advance();
      curve.values.push_back(evo.distance());
    }
    return curve;
  }
  LumpedEvolution<T> evo(params);
  TVCurve<T> curve{params, {}};
  curve.values.reserve(t_max + 1);
  curve.values.push_back(evo.distance());
  for (long long t = 1; t <= t_max; ++t) {
    evo.advance();
    curve.values.push_back(evo.distance());
  }
  return curve;
}

template <Scalar T>
TVCurve<T> spectral_tv_curve(const ChainParams& params, long long t_max, const SpectralData<T>& spectral) {
  if (t_max < 0) throw domain_error("t_max must be >= 0");
  if (!(spectral.params() == params)) throw domain_error("spectral data built for different parameters");
  const int d = params.d();
  const auto pi = stationary_lumped<T>(params);
  const auto& lambda = spectral.eigenvalues();

  // coeff[m][y] = φ_m(0) φ_m(y); powers[m] = λ_m^t.
  std::vector<std::vector<T>> coeff(d + 1, std::vector<T>(d + 1));
  for (int m = 0; m <= d; ++m) {
    for (int y = 0; y <= d; ++y) coeff[m][y] = spectral.phi_product(m, 0, y);
  }
  std::vector<T> powers(d + 1, from_int<T>(1));

  TVCurve<T> curve{params, {}};
  curve.values.reserve(t_max + 1);
  std::vector<T> row(d + 1);
  for (long long t = 0; t <= t_max; ++t) {
    for (int y = 0; y <= d; ++y) {
      T sum = from_int<T>(0);
      for (int m = 0; m <= d; ++m) sum += coeff[m][y] * powers[m];
      row[y] = pi[y] * sum;
    }
    curve.values.push_back(tv_distance<T>(std::span<const T>(row), pi.weights()));
    for (int m = 0; m <= d; ++m) powers[m] *= lambda[m];
  }
  return curve;
}


template <Scalar T>
std::vector<long long> mixing_times(const ChainParams& params, std::span<const T> eps,
                                    const MixingTimeOptions& options) {
  check_thresholds(eps);
  if constexpr (is_exact_v<T>) {
    ScaledExactEvolution evo(params);
    return scan(
        evo, eps.size(),
        [&](std::vector<long long>& out) {
          const BigInt gap = evo.scaled_gap();
          for (std::size_t i = 0; i < eps.size(); ++i) {
            if (out[i] < 0 && evo.within(gap, eps[i])) out[i] = evo.time();
          }
        },
        options);
  } else {
    LumpedEvolution<T> evo(params);
    return scan(
        evo, eps.size(),
        [&](std::vector<long long>& out) {
          const T dist = evo.distance();
          for (std::size_t i = 0; i < eps.size(); ++i) {
            if (out[i] < 0 && dist <= eps[i]) out[i] = evo.time();
          }
        },
        options);
  }
}

template <Scalar T>
long long mixing_time(const ChainParams& params, const T& eps, const MixingTimeOptions& options) {
  return mixing_times<T>(params, std::span<const T>(&eps, 1), options).front();
}

template struct TridiagonalKernel<Rational>;
template struct TridiagonalKernel<double>;
template class LumpedEvolution<Rational>;
template class LumpedEvolution<double>;
template TridiagonalKernel<Rational> build_kernel<Rational>(const ChainParams&);
template TridiagonalKernel<double> build_kernel<double>(const ChainParams&);
template ShellDistribution<Rational> step<Rational>(const ShellDistribution<Rational>&,
                                                    const TridiagonalKernel<Rational>&);
template ShellDistribution<double> step<double>(const ShellDistribution<double>&, const TridiagonalKernel<double>&);
template TVCurve<Rational> tv_curve<Rational>(const ChainParams&, long long);
template TVCurve<double> tv_curve<double>(const ChainParams&, long long);
template TVCurve<Rational> spectral_tv_curve<Rational>(const ChainParams&, long long, const SpectralData<Rational>&);
template TVCurve<double> spectral_tv_curve<double>(const ChainParams&, long long, const SpectralData<double>&);
template long long mixing_time<Rational>(const ChainParams&, const Rational&, const MixingTimeOptions&);
template long long mixing_time<double>(const ChainParams&, const double&, const MixingTimeOptions&);
template std::vector<long long> mixing_times<Rational>(const ChainParams&, std::span<const Rational>,
                                                       const MixingTimeOptions&);
template std::vector<long long> mixing_times<double>(const ChainParams&, std::span<const double>,
                                                     const MixingTimeOptions&);

}  // namespace rookmix
