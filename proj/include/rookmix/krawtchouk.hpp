#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rookmix/chain_core.hpp"

namespace rookmix {

/// Generalized binomial coefficient via the falling factorial:
/// x(x-1)...(x-j+1)/j!, and 1 when j = 0. Valid for any real x.
template <Scalar T>
T generalized_binom(const T& x, unsigned j);

/// K_m(x) = Σ_j (-1)^j C(x,j) C(d-x,m-j) (n-1)^{m-j} evaluated term by term
/// with generalized binomials. x need not be an integer.
template <Scalar T>
T krawtchouk_direct(int m, const T& x, const ChainParams& params);

/// K_m(x) at an integer shell. Exact mode uses the direct alternating sum;
/// float mode uses the three-term recurrence in m.
template <Scalar T>
T krawtchouk_eval(int m, int x, const ChainParams& params);

/// Normalized values r_m(x) = K_m(x)/K_m(0) for one shell x and all m, from
///
///   (d-m)(n-1) r_{m+1} = [(d-m)(n-1) + m - n x] r_m - m r_{m-1}.
///
/// Exact mode runs the recurrence forward from r_0 = 1, r_1. Float mode runs it
/// from both ends (seeded by r_0, r_1 and by r_d, r_{d-1}) and joins the two
/// sweeps at the twist index with the smallest combined pivot; a plain
/// forward sweep in double precision loses all accuracy once r_m(x) decays.
template <Scalar T>
std::vector<T> krawtchouk_recurrence_column(int x, const ChainParams& params);

/// Weighted inner product Σ_i C(d,i)(n-1)^i A(i) B(i).
template <Scalar T>
T weighted_inner(std::span<const T> a, std::span<const T> b, const ChainParams& params);

/// All K_m(x) for m, x in 0..d, stored as K_m(0) times the normalized value
/// K_m(x)/K_m(0). The normalized entries stay within [-1, 1]; K_m(0) itself
/// exceeds double range for large d.
template <Scalar T>
class KrawtchoukTable {
 public:
  /// Exact mode: direct alternating sum. Float mode: recurrence.
  static KrawtchoukTable build(const ChainParams& params);

  const ChainParams& params() const { return params_; }
  int degree() const { return params_.d(); }

  const T& normalized(int m, int x) const { return normalized_[index(m, x)]; }
  std::span<const T> normalized_row(int m) const {
    return std::span<const T>(normalized_).subspan(index(m, 0), params_.d() + 1);
  }

  /// K_m(0) = C(d,m)(n-1)^m.
  const T& endpoint(int m) const { return endpoint_[m]; }

  T value(int m, int x) const { return endpoint_[m] * normalized(m, x); }
  std::vector<T> row(int m) const;

 private:
  KrawtchoukTable(const ChainParams& params, std::vector<T> normalized, std::vector<T> endpoint)
      : params_(params), normalized_(std::move(normalized)), endpoint_(std::move(endpoint)) {}

  std::size_t index(int m, int x) const {
    return static_cast<std::size_t>(m) * (params_.d() + 1) + static_cast<std::size_t>(x);
  }

  ChainParams params_;
  std::vector<T> normalized_;
  std::vector<T> endpoint_;
};

/// Process-wide cache keyed by (n, d); tables are immutable once built.
template <Scalar T>
std::shared_ptr<const KrawtchoukTable<T>> cached_krawtchouk_table(const ChainParams& params);

}  // namespace rookmix
