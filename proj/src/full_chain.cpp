#include "rookmix/full_chain.hpp"

#include <cmath>

#include "rookmix/lumped_chain.hpp"
#include "rookmix/rng.hpp"

namespace rookmix {

bool within_cap(const ChainParams& params, std::size_t cap) {
  return params.state_count() <= BigInt(std::to_string(cap));
}

StateIndexer::StateIndexer(const ChainParams& params, std::size_t cap) : params_(params), size_(0) {
  if (!within_cap(params, cap)) {
    throw resource_error("state space n^d = " + params.state_count().get_str() + " exceeds the brute-force cap " +
                         std::to_string(cap));
  }
  size_ = params.state_count().get_ui();
  stride_.resize(params.d());
  std::size_t s = 1;
  for (int i = 0; i < params.d(); ++i) {
    stride_[i] = s;
    s *= static_cast<std::size_t>(params.n());
  }
  shell_.resize(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    int count = 0;
    std::size_t rest = idx;
    for (int i = 0; i < params.d(); ++i) {
      if (rest % params.n() != 0) ++count;
      rest /= params.n();
    }
    shell_[idx] = count;
  }
}

std::size_t StateIndexer::encode(const FullState& state) const {
  if (state.coords.size() != static_cast<std::size_t>(params_.d())) throw domain_error("state has wrong dimension");
  std::size_t idx = 0;
  for (int i = 0; i < params_.d(); ++i) {
    const int v = state.coords[i];
    if (v < 1 || v > params_.n()) throw domain_error("coordinate out of range 1..n");
    idx += static_cast<std::size_t>(v - 1) * stride_[i];
  }
  return idx;
}

FullState StateIndexer::decode(std::size_t index) const {
  FullState state;
  state.coords.resize(params_.d());
  for (int i = 0; i < params_.d(); ++i) {
    state.coords[i] = static_cast<int>(index % params_.n()) + 1;
    index /= params_.n();
  }
  return state;
}

template <Scalar T>
T full_transition(const ChainParams& params, const FullState& z, const FullState& w) {
  int differing = 0;
  for (int i = 0; i < params.d(); ++i) differing += z.coords[i] != w.coords[i] ? 1 : 0;
  if (differing != 1) return from_int<T>(0);
  if constexpr (is_exact_v<T>) {
    return make_rational(1, params.degree());
  } else {
    return 1.0 / static_cast<double>(params.degree());
  }
}

template <Scalar T>
FullDistribution<T>::FullDistribution(IndexerPtr indexer, std::vector<T> weights)
    : indexer_(std::move(indexer)), weights_(std::move(weights)) {
  if (weights_.size() != indexer_->size()) throw domain_error("full distribution has wrong length");
  T mass = from_int<T>(0);
  for (const T& w : weights_) {
    if (w < 0) throw domain_error("full distribution has a negative weight");
    mass += w;
  }
  if constexpr (is_exact_v<T>) {
    if (mass != 1) throw domain_error("full distribution does not sum to 1");
  } else {
    if (std::abs(mass - 1.0) > 1e-12) throw domain_error("full distribution does not sum to 1");
  }
}

template <Scalar T>
FullDistribution<T> FullDistribution<T>::point_mass(IndexerPtr indexer, const FullState& state) {
  std::vector<T> w(indexer->size(), from_int<T>(0));
  w[indexer->encode(state)] = from_int<T>(1);
  return FullDistribution(trusted, std::move(indexer), std::move(w));
}

template <Scalar T>
FullDistribution<T> FullDistribution<T>::uniform(IndexerPtr indexer) {
  const T each = ratio<T>(BigInt(1), BigInt(std::to_string(indexer->size())));
  std::vector<T> w(indexer->size(), each);
  return FullDistribution(trusted, std::move(indexer), std::move(w));
}

template <Scalar T>
FullDistribution<T> FullDistribution<T>::shell_uniform(IndexerPtr indexer, int shell) {
  const T each = ratio<T>(BigInt(1), shell_size(indexer->params(), shell));
  std::vector<T> w(indexer->size(), from_int<T>(0));
  for (std::size_t idx = 0; idx < indexer->size(); ++idx) {
    if (indexer->shell_of(idx) == shell) w[idx] = each;
  }
  return FullDistribution(trusted, std::move(indexer), std::move(w));
}

template <Scalar T>
FullDistribution<T> full_step_distribution(const FullDistribution<T>& dist) {
  const auto& indexer = dist.indexer();
  const int n = indexer.params().n();
  const int d = indexer.params().d();
  const T move_prob = ratio<T>(BigInt(1), BigInt(std::to_string(indexer.params().degree())));
  auto w = dist.weights();
  std::vector<T> out(indexer.size(), from_int<T>(0));
  for (std::size_t idx = 0; idx < indexer.size(); ++idx) {
    if (is_zero(w[idx])) continue;
    const T share = w[idx] * move_prob;
    std::size_t stride = 1;
    std::size_t rest = idx;
    for (int axis = 0; axis < d; ++axis) {
      const auto digit = rest % n;
      rest /= n;
      const std::size_t base = idx - digit * stride;
      for (int v = 0; v < n; ++v) {
        if (static_cast<std::size_t>(v) == digit) continue;
        out[base + static_cast<std::size_t>(v) * stride] += share;
      }
      stride *= n;
    }
  }
  return FullDistribution<T>(trusted, dist.indexer_ptr(), std::move(out));
}

template <Scalar T>
ShellDistribution<T> shell_projection(const FullDistribution<T>& dist) {
  const auto& indexer = dist.indexer();
  std::vector<T> mass(indexer.params().d() + 1, from_int<T>(0));
  auto w = dist.weights();
  for (std::size_t idx = 0; idx < indexer.size(); ++idx) mass[indexer.shell_of(idx)] += w[idx];
  return ShellDistribution<T>(trusted, indexer.params(), std::move(mass));
}

template <Scalar T>
LumpingReport<T> verify_lumping(const ChainParams& params, long long t_max, std::size_t cap) {
  if (t_max < 0) throw domain_error("t_max must be >= 0");
  auto indexer = std::make_shared<const StateIndexer>(params, cap);
  const auto pi_full = FullDistribution<T>::uniform(indexer);
  auto full = FullDistribution<T>::point_mass(indexer, FullState{std::vector<int>(params.d(), 1)});
  LumpedEvolution<T> lumped(params);

  LumpingReport<T> report{params, {}, true, 0.0};
  for (long long t = 0; t <= t_max; ++t) {
    if (t > 0) {
      full = full_step_distribution(full);
      lumped.advance();
    }
    LumpingRow<T> row{t, tv_distance<T>(full.weights(), pi_full.weights()), lumped.distance(), false};
    const double diff = std::abs(to_double(T(row.tv_full - row.tv_lumped)));
    if constexpr (is_exact_v<T>) {
      row.equal = row.tv_full == row.tv_lumped;
    } else {
      row.equal = diff <= 1e-12;
    }
    report.all_equal = report.all_equal && row.equal;
    report.max_abs_diff = std::max(report.max_abs_diff, diff);
    report.rows.push_back(std::move(row));
  }
  return report;
}

Translation::Translation(const ChainParams& params, const FullState& from, const FullState& to) : n_(params.n()) {
  shift_.resize(params.d());
  for (int i = 0; i < params.d(); ++i) shift_[i] = ((to.coords[i] - from.coords[i]) % n_ + n_) % n_;
}

FullState Translation::operator()(const FullState& v) const {
  FullState out;
  out.coords.resize(v.coords.size());
  for (std::size_t i = 0; i < v.coords.size(); ++i) out.coords[i] = (v.coords[i] - 1 + shift_[i]) % n_ + 1;
  return out;
}

FullState random_state(const ChainParams& params, std::uint64_t seed, std::uint64_t index) {
  auto rng = substream(seed, index);
  FullState s;
  s.coords.resize(params.d());
  for (int& c : s.coords) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.n()))) + 1;
  return s;
}

template <Scalar T>
TransitivityReport verify_transitivity(const ChainParams& params, long long t, int trials, std::uint64_t seed,
                                       std::size_t cap) {
  if (!params.transitive()) throw domain_error("transitivity requires d >= 2");
  if (t < 0) throw domain_error("t must be >= 0");
  auto indexer = std::make_shared<const StateIndexer>(params, cap);
  const auto pi_full = FullDistribution<T>::uniform(indexer);

  auto evolve_tv = [&](const FullState& start) {
    auto dist = FullDistribution<T>::point_mass(indexer, start);
    for (long long s = 0; s < t; ++s) dist = full_step_distribution(dist);
    return tv_distance<T>(dist.weights(), pi_full.weights());
  };

  const FullState ones{std::vector<int>(params.d(), 1)};
  const T reference = evolve_tv(ones);

  TransitivityReport report{params, t, {}, 0, 0, true};
  for (int k = 0; k < trials; ++k) {
    const FullState start = random_state(params, seed, static_cast<std::uint64_t>(k));
    const T value = evolve_tv(start);
    TransitivityTrial trial{start, to_double(value), to_double(reference), false};
    if constexpr (is_exact_v<T>) {
      trial.equal = value == reference;
    } else {
      trial.equal = std::abs(value - reference) <= 1e-12;
    }
    report.passed = report.passed && trial.equal;
    report.trials.push_back(std::move(trial));
  }

  // Translation checks: ξ(x) = y, and P(z, w) = P(ξz, ξw) on random pairs, half
  // of them adjacent so that both the zero and nonzero branches are exercised.
  constexpr int kPairs = 100;
  const std::uint64_t pair_seed = SplitMix64::mix(seed ^ 0xD1B54A32D192ED03ULL);
  for (int k = 0; k < kPairs; ++k) {
    const FullState x = random_state(params, pair_seed, 4 * k);
    const FullState y = random_state(params, pair_seed, 4 * k + 1);
    const Translation xi(params, x, y);
    const FullState z = random_state(params, pair_seed, 4 * k + 2);
    FullState w = random_state(params, pair_seed, 4 * k + 3);
    if (k % 2 == 0) {
      w = z;
      auto rng = substream(pair_seed, 4 * k + 3);
      rook_move(w.coords, params.n(), rng);
    }
    ++report.translation_checks;
    const bool maps = xi(x) == y;
    const bool preserves = full_transition<T>(params, z, w) == full_transition<T>(params, xi(z), xi(w));
    if (!maps || !preserves) {
      ++report.translation_failures;
      report.passed = false;
    }
  }
  return report;
}

ShellHistogram mc_shell_histogram(const ChainParams& params, long long t, std::uint64_t samples,
                                  std::uint64_t seed) {
  if (samples < 1) throw domain_error("samples must be >= 1");
  if (t < 0) throw domain_error("t must be >= 0");
  ShellHistogram hist{params, t, samples, seed, std::vector<std::uint64_t>(params.d() + 1, 0), {}, {}};
  std::vector<int> coords(params.d());
  for (std::uint64_t k = 0; k < samples; ++k) {
    auto rng = substream(seed, k);
    std::fill(coords.begin(), coords.end(), 1);
    int shell = 0;
    for (long long s = 0; s < t; ++s) shell += rook_move(coords, params.n(), rng);
    ++hist.counts[shell];
  }
  const auto total = static_cast<double>(samples);
  for (std::uint64_t c : hist.counts) {
    const double p = static_cast<double>(c) / total;
    hist.frequency.push_back(p);
    hist.std_error.push_back(std::sqrt(p * (1.0 - p) / total));
  }
  return hist;
}

template Rational full_transition<Rational>(const ChainParams&, const FullState&, const FullState&);
template double full_transition<double>(const ChainParams&, const FullState&, const FullState&);
template class FullDistribution<Rational>;
template class FullDistribution<double>;
template FullDistribution<Rational> full_step_distribution<Rational>(const FullDistribution<Rational>&);
template FullDistribution<double> full_step_distribution<double>(const FullDistribution<double>&);
template ShellDistribution<Rational> shell_projection<Rational>(const FullDistribution<Rational>&);
template ShellDistribution<double> shell_projection<double>(const FullDistribution<double>&);
template LumpingReport<Rational> verify_lumping<Rational>(const ChainParams&, long long, std::size_t);
template LumpingReport<double> verify_lumping<double>(const ChainParams&, long long, std::size_t);
template TransitivityReport verify_transitivity<Rational>(const ChainParams&, long long, int, std::uint64_t,
                                                          std::size_t);
template TransitivityReport verify_transitivity<double>(const ChainParams&, long long, int, std::uint64_t,
                                                        std::size_t);

}  // namespace rookmix
