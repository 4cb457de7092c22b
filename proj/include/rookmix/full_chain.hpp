#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rookmix/chain_core.hpp"

namespace rookmix {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// A square of the board, coordinates in 1..n.
struct FullState {
  std::vector<int> coords;
  friend bool operator==(const FullState&, const FullState&) = default;
};

/// Mixed-radix indexing of {1..n}^d; coordinate 0 is the least significant digit.
class StateIndexer {
 public:
  /// Throws resource_error when n^d exceeds cap.
  StateIndexer(const ChainParams& params, std::size_t cap = kDefaultStateCap);

  const ChainParams& params() const { return params_; }
  std::size_t size() const { return size_; }

  std::size_t encode(const FullState& state) const;
  FullState decode(std::size_t index) const;

  /// Hamming distance of the indexed state from 1̂.
  int shell_of(std::size_t index) const { return shell_[index]; }

 private:
  ChainParams params_;
  std::size_t size_;
  std::vector<std::size_t> stride_;
  std::vector<int> shell_;
};

/// True if n^d <= cap, without materializing anything.
bool within_cap(const ChainParams& params, std::size_t cap);

/// P(z, w) = 1/(d(n-1)) when z and w differ in exactly one coordinate.
template <Scalar T>
T full_transition(const ChainParams& params, const FullState& z, const FullState& w);

/// Probability vector on all n^d squares.
template <Scalar T>
class FullDistribution {
 public:
  using IndexerPtr = std::shared_ptr<const StateIndexer>;

  /// Validates length n^d, nonnegativity and unit mass (exact / 1e-12).
  FullDistribution(IndexerPtr indexer, std::vector<T> weights);
  FullDistribution(trusted_t, IndexerPtr indexer, std::vector<T> weights)
      : indexer_(std::move(indexer)), weights_(std::move(weights)) {}

  static FullDistribution point_mass(IndexerPtr indexer, const FullState& state);
  static FullDistribution uniform(IndexerPtr indexer);
  /// μ_x: uniform over the Hamming shell H_x.
  static FullDistribution shell_uniform(IndexerPtr indexer, int shell);

  const StateIndexer& indexer() const { return *indexer_; }
  const IndexerPtr& indexer_ptr() const { return indexer_; }
  const ChainParams& params() const { return indexer_->params(); }
  std::span<const T> weights() const { return weights_; }

 private:
  IndexerPtr indexer_;
  std::vector<T> weights_;
};

/// One exact step under P, applied matrix-free over the d(n-1) neighbours of
/// each state.
template <Scalar T>
FullDistribution<T> full_step_distribution(const FullDistribution<T>& dist);

/// Aggregates mass by Hamming distance from 1̂.
template <Scalar T>
ShellDistribution<T> shell_projection(const FullDistribution<T>& dist);

template <Scalar T>
struct LumpingRow {
  long long t = 0;
  T tv_full;
  T tv_lumped;
  bool equal = false;
};

template <Scalar T>
struct LumpingReport {
  ChainParams params;
  std::vector<LumpingRow<T>> rows;
  bool all_equal = true;
  double max_abs_diff = 0.0;
};

/// TV(P^t δ_1̂, π) against TV(P*^t δ_0, π*) for t = 0..t_max.
template <Scalar T>
LumpingReport<T> verify_lumping(const ChainParams& params, long long t_max, std::size_t cap = kDefaultStateCap);

/// Coordinatewise cyclic translation carrying `from` to `to`:
/// v_i -> ((v_i - 1 + to_i - from_i) mod n) + 1.
class Translation {
 public:
  Translation(const ChainParams& params, const FullState& from, const FullState& to);
  FullState operator()(const FullState& v) const;

 private:
  int n_;
  std::vector<int> shift_;
};

struct TransitivityTrial {
  FullState start;
  double tv_start = 0.0;  // TV(P^t δ_start, π)
  double tv_reference = 0.0;  // TV(P^t δ_1̂, π)
  bool equal = false;
};

struct TransitivityReport {
  ChainParams params;
  long long t = 0;
  std::vector<TransitivityTrial> trials;
  int translation_checks = 0;
  int translation_failures = 0;
  bool passed = true;
};

/// Random starts have the same TV profile as 1̂ (exactly in rational mode,
/// 1e-12 in float mode), and random translations preserve P(z, w) and map
/// x to y. Requires d >= 2.
template <Scalar T>
TransitivityReport verify_transitivity(const ChainParams& params, long long t, int trials, std::uint64_t seed,
                                       std::size_t cap = kDefaultStateCap);

/// A uniformly random square.
FullState random_state(const ChainParams& params, std::uint64_t seed, std::uint64_t index);

struct ShellHistogram {
  ChainParams params;
  long long t = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> counts;
  std::vector<double> frequency;
  std::vector<double> std_error;  // sqrt(p̂(1-p̂)/N)

  ShellDistribution<double> distribution() const { return ShellDistribution<double>(params, frequency); }
};

/// Simulates `samples` independent full-walk trajectories of length t from 1̂.
/// Trajectory k draws from substream(seed, k), so the result does not depend
/// on evaluation order.
ShellHistogram mc_shell_histogram(const ChainParams& params, long long t, std::uint64_t samples,
                                  std::uint64_t seed);

/// Advances one full-walk state in place: a uniform axis, then a uniform
/// value among the n-1 others. Returns the change in Hamming distance from 1̂.
template <class Rng>
int rook_move(std::vector<int>& coords, int n, Rng& rng) {
  const auto axis = static_cast<std::size_t>(rng.below(coords.size()));
  const int old_value = coords[axis];
  int new_value = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1))) + 1;
  if (new_value >= old_value) ++new_value;
  coords[axis] = new_value;
  return (new_value != 1 ? 1 : 0) - (old_value != 1 ? 1 : 0);
}

}  // namespace rookmix
