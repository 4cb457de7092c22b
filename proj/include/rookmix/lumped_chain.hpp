#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rookmix/chain_core.hpp"

namespace rookmix {

template <Scalar T>
class SpectralData;

/// Transition operator P* of the Hamming-shell birth-death chain.
///
///   up[x]   = (d - x) / d
///   down[x] = x / (d(n-1))
///   stay[x] = x(n-2) / (d(n-1))
template <Scalar T>
struct TridiagonalKernel {
  ChainParams params;
  std::vector<T> up;
  std::vector<T> down;
  std::vector<T> stay;

  /// P*(x, y); zero off the tridiagonal band.
  T entry(int x, int y) const;

  /// (P* f)(x) = Σ_y P*(x,y) f(y), a function on shells.
  std::vector<T> apply(std::span<const T> f) const;
};

template <Scalar T>
TridiagonalKernel<T> build_kernel(const ChainParams& params);

/// One step of the lumped chain: returns dist · P*.
template <Scalar T>
ShellDistribution<T> step(const ShellDistribution<T>& dist, const TridiagonalKernel<T>& kernel);

/// Distance to stationarity d(t) for t = 0..t_max, from shell 0.
template <Scalar T>
struct TVCurve {
  ChainParams params;
  std::vector<T> values;  // values[t]
};

template <Scalar T>
TVCurve<T> tv_curve(const ChainParams& params, long long t_max);

/// Same curve through the eigen-expansion
///   P*^t(0, y) = π*(y) Σ_m φ_m(0) φ_m(y) λ_m^t.
/// In float mode the terms reach sqrt(π*(y)/π*(0)) in size and cancel, so
/// the result is only trustworthy while n^{d/2} stays well below 1/DBL_EPSILON.
template <Scalar T>
TVCurve<T> spectral_tv_curve(const ChainParams& params, long long t_max, const SpectralData<T>& spectral);

/// Evolves δ_0 forward one step at a time, tracking the distance to π*.
template <Scalar T>
class LumpedEvolution {
 public:
  explicit LumpedEvolution(const ChainParams& params);
  LumpedEvolution(TridiagonalKernel<T> kernel, ShellDistribution<T> start);

  void advance();
  long long time() const { return time_; }
  const ShellDistribution<T>& current() const { return current_; }
  const ShellDistribution<T>& stationary() const { return stationary_; }
  T distance() const { return tv_distance(current_, stationary_); }

 private:
  TridiagonalKernel<T> kernel_;
  ShellDistribution<T> stationary_;
  ShellDistribution<T> current_;
  long long time_ = 0;
};

struct MixingTimeOptions {
  long long initial_horizon = 64;
  long long max_horizon = 1LL << 26;
};

/// t_mix(eps) = min{t : d(t) <= eps}. Throws domain_error unless 0 < eps < 1
/// and resource_error if the horizon is exhausted first.
template <Scalar T>
long long mixing_time(const ChainParams& params, const T& eps, const MixingTimeOptions& options = {});

/// t_mix for several thresholds from a single evolution; result order matches eps.
template <Scalar T>
std::vector<long long> mixing_times(const ChainParams& params, std::span<const T> eps,
                                    const MixingTimeOptions& options = {});

}  // namespace rookmix
