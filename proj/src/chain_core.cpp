#include "rookmix/chain_core.hpp"

namespace rookmix {

ChainParams::ChainParams(int n, int d) : n_(n), d_(d) {
  if (n < 3) {
    throw domain_error("board length n must be >= 3 (n = 2 leaves no value to move to within a shell), got " +
                       std::to_string(n));
  }
  if (d < 1) throw domain_error("dimension d must be >= 1, got " + std::to_string(d));
}

BigInt ChainParams::state_count() const { return power(BigInt(n_), static_cast<unsigned long>(d_)); }

std::vector<std::string> ChainParams::warnings() const {
  std::vector<std::string> out;
  if (d_ == 1) {
    out.emplace_back("d = 1: transitivity-based claims assume d >= 2; lumped-chain results are still exact");
  }
  return out;
}

BigInt shell_size(const ChainParams& params, int shell) {
  if (shell < 0 || shell > params.d()) {
    throw domain_error("shell index " + std::to_string(shell) + " outside 0.." + std::to_string(params.d()));
  }
  return binomial(params.d(), shell) * power(BigInt(params.n() - 1), shell);
}

std::vector<BigInt> shell_sizes(const ChainParams& params) {
  std::vector<BigInt> out;
  out.reserve(params.d() + 1);
  // φ(i+1) = φ(i) (d-i)(n-1)/(i+1), exact at every step.
  BigInt current = 1;
  for (int i = 0; i <= params.d(); ++i) {
    out.push_back(current);
    current *= static_cast<unsigned long>(params.d() - i);
    current *= static_cast<unsigned long>(params.n() - 1);
    mpz_divexact_ui(current.get_mpz_t(), current.get_mpz_t(), static_cast<unsigned long>(i + 1));
  }
  return out;
}

template <Scalar T>
ShellDistribution<T>::ShellDistribution(const ChainParams& params, std::vector<T> weights)
    : params_(params), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<std::size_t>(params.d() + 1)) {
    throw domain_error("shell distribution needs d+1 = " + std::to_string(params.d() + 1) + " weights, got " +
                       std::to_string(weights_.size()));
  }
  for (const T& w : weights_) {
    if (w < 0) throw domain_error("shell distribution has a negative weight");
  }
  const T mass = total();
  if constexpr (is_exact_v<T>) {
    if (mass != 1) throw domain_error("shell distribution does not sum to 1 (sum = " + format_scalar(mass) + ")");
  } else {
    if (std::abs(mass - 1.0) > 1e-12) {
      throw domain_error("shell distribution does not sum to 1 (sum = " + format_scalar(mass) + ")");
    }
  }
}

template <Scalar T>
ShellDistribution<T> ShellDistribution<T>::point_mass(const ChainParams& params, int shell) {
  if (shell < 0 || shell > params.d()) throw domain_error("point mass shell out of range");
  std::vector<T> w(params.d() + 1, from_int<T>(0));
  w[shell] = from_int<T>(1);
  return ShellDistribution(trusted, params, std::move(w));
}

template <Scalar T>
T ShellDistribution<T>::total() const {
  T sum = from_int<T>(0);
  for (const T& w : weights_) sum += w;
  return sum;
}

template <Scalar T>
ShellDistribution<T> stationary_lumped(const ChainParams& params) {
  const BigInt states = params.state_count();
  std::vector<T> w;
  w.reserve(params.d() + 1);
  for (const BigInt& phi : shell_sizes(params)) w.push_back(ratio<T>(phi, states));
  return ShellDistribution<T>(trusted, params, std::move(w));
}

template <Scalar T>
T tv_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw domain_error("tv_distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  T sum = from_int<T>(0);
  for (std::size_t i = 0; i < a.size(); ++i) sum += abs_value(T(a[i] - b[i]));
  return sum / 2;
}

template <Scalar T>
T tv_distance(const ShellDistribution<T>& a, const ShellDistribution<T>& b) {
  if (!(a.params() == b.params())) throw domain_error("tv_distance: distributions have different parameters");
  return tv_distance<T>(a.weights(), b.weights());
}

template class ShellDistribution<Rational>;
template class ShellDistribution<double>;
template ShellDistribution<Rational> stationary_lumped<Rational>(const ChainParams&);
template ShellDistribution<double> stationary_lumped<double>(const ChainParams&);
template Rational tv_distance<Rational>(std::span<const Rational>, std::span<const Rational>);
template double tv_distance<double>(std::span<const double>, std::span<const double>);
template Rational tv_distance<Rational>(const ShellDistribution<Rational>&, const ShellDistribution<Rational>&);
template double tv_distance<double>(const ShellDistribution<double>&, const ShellDistribution<double>&);

}  // namespace rookmix
