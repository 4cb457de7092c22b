#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rookmix/krawtchouk.hpp"
#include "rookmix/lumped_chain.hpp"

namespace rookmix {

/// λ_m = 1 - mn/(d(n-1)) for m = 0..d.
template <Scalar T>
std::vector<T> eigenvalues(const ChainParams& params);

/// The π*-orthonormal eigen-system φ_m = K_m / sqrt(⟨K_m, K_m⟩_{π*}).
///
/// φ_m itself is irrational in general, so the exact interface exposes the
/// quantities the theory actually consumes: products φ_m(x)φ_m(y), the
/// squares φ_m(0)^2, and signed squares of Gram entries. All are exact in
/// rational mode.
template <Scalar T>
class SpectralData {
 public:
  SpectralData(std::shared_ptr<const KrawtchoukTable<T>> table, std::vector<T> eigenvalues, std::vector<T> pi,
               std::vector<T> norm_sq);

  const ChainParams& params() const { return table_->params(); }
  const KrawtchoukTable<T>& table() const { return *table_; }
  const std::vector<T>& eigenvalues() const { return eigenvalues_; }
  const std::vector<T>& stationary() const { return pi_; }

  /// ⟨K_m, K_m⟩_{π*} / K_m(0)^2, i.e. the π*-norm of the normalized row.
  const T& normalized_norm_sq(int m) const { return norm_sq_[m]; }

  /// φ_m(x) φ_m(y).
  T phi_product(int m, int x, int y) const;

  /// φ_m(0)^2.
  T phi0_sq(int m) const { return 1 / norm_sq_[m]; }

  /// sign(g) g^2 where g = ⟨φ_m, φ_j⟩_{π*}; identity matrix iff orthonormal.
  T gram_signed_square(int m, int j) const;

  /// Floating value of φ_m(x).
  double phi(int m, int x) const;

 private:
  std::shared_ptr<const KrawtchoukTable<T>> table_;
  std::vector<T> eigenvalues_;
  std::vector<T> pi_;
  std::vector<T> norm_sq_;
};

/// Normalizes a Krawtchouk table in the π*-weighted inner product. The norms
/// are computed from the table, not taken from a closed form.
template <Scalar T>
SpectralData<T> orthonormalize(const ChainParams& params, std::shared_ptr<const KrawtchoukTable<T>> table);

/// Convenience: orthonormalize the cached table for params.
template <Scalar T>
SpectralData<T> build_spectral(const ChainParams& params);

/// max_x |(P* K_m)(x) - λ_m K_m(x)| / max_x |K_m(x)|.
template <Scalar T>
T eigen_residual(const ChainParams& params, int m);

/// Largest |⟨P*f, g⟩_{π*} - ⟨f, P*g⟩_{π*}| over `trials` random pairs.
/// Rational mode draws small random fractions; float mode draws uniforms in [-1, 1].
template <Scalar T>
T self_adjoint_check(const ChainParams& params, int trials, std::uint64_t seed);

/// ⟨f, g⟩_{π*}.
template <Scalar T>
T pi_inner(std::span<const T> f, std::span<const T> g, std::span<const T> pi);

template <Scalar T>
struct L2Identity {
  long long t = 0;
  T lhs;           // ||P*^t(0,.)/π* - 1||^2_{2,π*}, from the evolved distribution
  T rhs;           // Σ_{m>=1} φ_m(0)^2 λ_m^{2t}
  T four_tv_sq;    // 4 d(t)^2
  bool equal = false;
  bool dominates_tv = false;  // 4 d(t)^2 <= lhs
};

template <Scalar T>
L2Identity<T> l2_identity_check(const ChainParams& params, long long t);

/// The identity for every t in 0..t_max, sharing one evolution.
template <Scalar T>
std::vector<L2Identity<T>> l2_identity_series(const ChainParams& params, long long t_max);

}  // namespace rookmix
