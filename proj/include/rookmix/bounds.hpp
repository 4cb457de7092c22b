#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rookmix/chain_core.hpp"
#include "rookmix/lumped_chain.hpp"

namespace rookmix {

/// Eigenfunction (Wilson) lower bound, evaluated from shell 0:
///   (log(d(n-1)/2n) + log((1-eps)/eps)) / (2 log(d(n-1)/(d(n-1)-n))).
/// Throws precondition_error unless d(n-1) > 2n, i.e. α = n/(d(n-1)) < 1/2.
double wilson_lower(const ChainParams& params, double eps);

/// True when the Wilson hypothesis d(n-1) > 2n holds.
bool wilson_applicable(const ChainParams& params);

/// R = n^2 / (d^2 (n-1)^2).
template <Scalar T>
T wilson_R(const ChainParams& params);

/// E_x |Φ(X_1) - Φ(x)|^2 for Φ = K_1/K_1(0) and X_0 in shell x:
///   n^2 (d(n-1) + x(2-n)) / (d^3 (n-1)^3).
template <Scalar T>
T wilson_variance(const ChainParams& params, int x);

/// The upper bound in the form -(d(n-1)/2n) log((4eps^2+1)^{1/d} - 1).
double l2_upper_paper(const ChainParams& params, double eps);

/// Upper bound from the orthonormal system, whose φ_m(0)^2 = C(d,m)(n-1)^m:
///   -(d(n-1)/2n) log(((4eps^2+1)^{1/d} - 1)/(n-1)).
/// Throws domain_error when (4eps^2+1)^{1/d} - 1 >= n-1.
double l2_upper_orthonormal(const ChainParams& params, double eps);

/// The same closed form for arbitrary real n, d; no support checks beyond
/// the logarithm's domain. Used to test algebraic identities such as n = 2.
double l2_upper_orthonormal_formula(double n, double d, double eps);

struct KimBounds {
  double lower = 0.0;  // (d(n-1)/n) log(1/(2 eps))
  double upper = 0.0;  // (d(n-1)/n) log(n^d / eps)
};

KimBounds kim_bounds(const ChainParams& params, double eps);

/// Path-coupling bound ceil(log(d/eps) / log(d(n-1)/((d-1)(n-1)+1))). Requires d >= 2.
long long mcleman_upper(const ChainParams& params, double eps);

struct CutoffConstants {
  double c_l = 0.0;  // (log((1-eps)/eps) - 6 - log 2) / 2
  double c_u = 0.0;  // -log(log(4 eps^2 + 1)) / 2
};

CutoffConstants cutoff_constants(double eps);

/// c_u + log(n-1)/2: the upper window constant implied by the orthonormal bound.
double corrected_upper_constant(int n, double eps);

/// t_c = (d(n-1)/2n) log d.
double cutoff_center(const ChainParams& params);

/// w = d(n-1)/n.
double cutoff_window(const ChainParams& params);

/// Real-valued bound against an integer mixing time: a lower bound L holds
/// when t_mix >= ceil(L) - 1, an upper bound U when t_mix <= floor(U) + 1.
bool lower_bound_holds(double bound, long long tmix);
bool upper_bound_holds(double bound, long long tmix);

struct BoundEntry {
  std::string name;
  std::string kind;                  // "lower" or "upper"
  std::optional<double> value;       // empty when a precondition fails
  std::string note;                  // reason for a missing value, or a caveat
  std::optional<bool> valid;         // verdict vs exact t_mix, when both exist
};

struct BoundsReport {
  ChainParams params;
  double eps = 0.0;
  std::optional<long long> exact_tmix;
  std::string tmix_note;
  std::vector<BoundEntry> bounds;  // wilson_lower, l2_upper_paper, l2_upper_orthonormal, kim_lower, kim_upper, mcleman_upper

  const BoundEntry& entry(const std::string& name) const;
};

/// All bounds at (params, eps), compared against t_mix computed by lumped
/// evolution in mode T. eps is passed exactly so the threshold test is exact
/// in rational mode.
template <Scalar T>
BoundsReport bounds_report(const ChainParams& params, const Rational& eps, const MixingTimeOptions& options = {});

/// Same report against a known t_mix (or none).
BoundsReport bounds_report_for(const ChainParams& params, double eps, std::optional<long long> tmix);

struct CutoffRow {
  int n = 0;
  int d = 0;
  Rational eps;
  long long tmix = 0;             // t_mix(eps)
  long long tmix_complement = 0;  // t_mix(1 - eps)
  double t_c = 0.0;
  double w = 0.0;
  double u_low = 0.0;   // (tmix - 1 - t_c)/w: last time with d(t) > eps, rescaled
  double u_high = 0.0;  // (tmix - t_c)/w
  Rational ratio;       // t_mix(1-eps) / t_mix(eps)
  double c_l = 0.0;
  double c_u = 0.0;
  double c_u_corrected = 0.0;
  double window_low = 0.0;   // t_c + c_l w
  double window_high = 0.0;  // t_c + c_u' w
  bool in_window = false;
};

struct CutoffProfile {
  int n = 0;
  std::vector<int> d_values;
  std::vector<Rational> eps_values;
  std::vector<CutoffRow> rows;  // ordered by d, then eps as given
};

/// Exact mixing times and rescaled coordinates over a (d, eps) grid. One
/// lumped evolution per d serves every eps and its complement.
template <Scalar T>
CutoffProfile cutoff_profile(int n, const std::vector<int>& d_values, const std::vector<Rational>& eps_values,
                             const MixingTimeOptions& options = {});

/// d(t) sampled at t = round(t_c + u w) for each u; the profile-collapse check
/// compares these across d.
std::vector<double> rescaled_tv(const ChainParams& params, const std::vector<double>& u_values);

template <Scalar T>
struct NormViolation {
  int m = 0;
  T phi0_sq;          // computed φ_m(0)^2
  BigInt claimed;     // C(d,m)
};

/// Side-by-side comparison of the L² chain of inequalities at one time t,
/// under three readings of φ_m(0)^2:
///   as-stated: C(d,m);  orthonormal: computed;  literal: K_m/⟨K_m,K_m⟩ gives 1.
template <Scalar T>
struct DiscrepancyReport {
  ChainParams params;
  long long t = 0;
  T four_tv_sq;       // 4 d(t)^2
  T l2_lhs;           // Σ (p - π)^2/π
  T as_stated_sum;    // Σ_{m>=1} C(d,m) λ_m^{2t}
  T orthonormal_sum;  // Σ_{m>=1} φ_m(0)^2 λ_m^{2t}
  T literal_sum;      // Σ_{m>=1} λ_m^{2t}
  bool as_stated_valid = false;
  bool orthonormal_valid = false;
  bool literal_valid = false;
  bool orthonormal_matches_lhs = false;
  bool literal_matches_lhs = false;
  std::vector<NormViolation<T>> norm_violations{};  // m with φ_m(0)^2 > C(d,m)
  std::string norm_reading{};                  // how ⟨K_m,K_m⟩ factorizes, as verified
  bool norm_reading_verified = false;
};

template <Scalar T>
DiscrepancyReport<T> discrepancy_report(const ChainParams& params, long long t);

}  // namespace rookmix
