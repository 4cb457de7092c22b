#pragma once

#include <span>
#include <string>
#include <vector>

#include "rookmix/errors.hpp"
#include "rookmix/numeric.hpp"

namespace rookmix {

/// Board length n and dimension d of the Rook's Walk on {1..n}^d.
class ChainParams {
 public:
  /// Throws domain_error unless n >= 3 and d >= 1. With n = 2 the lumped
  /// chain has no "stay" move and the board has no spare values to move to
  /// within a shell, so it is outside the supported family.
  ChainParams(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }

  /// Number of rook moves from any square, d(n-1).
  long long degree() const { return static_cast<long long>(d_) * (n_ - 1); }

  /// |Ω| = n^d, exact.
  BigInt state_count() const;

  /// The transitivity argument (and everything built on it) needs d >= 2.
  bool transitive() const { return d_ >= 2; }

  /// Human-readable caveats attached to every output for these parameters.
  std::vector<std::string> warnings() const;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;

 private:
  int n_;
  int d_;
};

/// φ(i) = |H_i| = C(d,i)(n-1)^i, the size of the i-th Hamming shell around 1̂.
BigInt shell_size(const ChainParams& params, int shell);

/// All shell sizes for i = 0..d.
std::vector<BigInt> shell_sizes(const ChainParams& params);

struct trusted_t {
  explicit trusted_t() = default;
};
inline constexpr trusted_t trusted{};

/// Probability vector over shells 0..d.
template <Scalar T>
class ShellDistribution {
 public:
  /// Validates length d+1, nonnegativity, and unit mass (exact in rational
  /// mode, 1e-12 in float mode).
  ShellDistribution(const ChainParams& params, std::vector<T> weights);

  /// Skips validation; for values produced by mass-preserving operations.
  ShellDistribution(trusted_t, const ChainParams& params, std::vector<T> weights)
      : params_(params), weights_(std::move(weights)) {}

  static ShellDistribution point_mass(const ChainParams& params, int shell);

  const ChainParams& params() const { return params_; }
  std::span<const T> weights() const { return weights_; }
  const T& operator[](std::size_t shell) const { return weights_[shell]; }
  std::size_t size() const { return weights_.size(); }
  T total() const;

 private:
  ChainParams params_;
  std::vector<T> weights_;
};

/// π*(x) = φ(x) n^{-d}, the image of the uniform distribution on Ω.
template <Scalar T>
ShellDistribution<T> stationary_lumped(const ChainParams& params);

/// ½ Σ |a_i - b_i|.
template <Scalar T>
T tv_distance(const ShellDistribution<T>& a, const ShellDistribution<T>& b);

/// Same sum on raw vectors; used by the full chain where vectors have n^d entries.
template <Scalar T>
T tv_distance(std::span<const T> a, std::span<const T> b);

}  // namespace rookmix
