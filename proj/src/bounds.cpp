#include "rookmix/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "rookmix/spectral.hpp"

namespace rookmix {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("eps must lie in (0,1)");
}

double log_big(const BigInt& value) {
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exp) * std::log(2.0);
}

template <Scalar T>
bool close_enough(const T& a, const T& b) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b));
  }
}

}  // namespace

bool wilson_applicable(const ChainParams& params) { return params.degree() > 2LL * params.n(); }

double wilson_lower(const ChainParams& params, double eps) {
  check_eps(eps);
  if (!wilson_applicable(params)) {
    throw precondition_error("Wilson bound needs d(n-1) > 2n (alpha < 1/2); got d(n-1) = " +
                             std::to_string(params.degree()) + ", 2n = " + std::to_string(2 * params.n()));
  }
  const double deg = static_cast<double>(params.degree());
  const double n = params.n();
  const double numerator = std::log(deg / (2.0 * n)) + std::log((1.0 - eps) / eps);
  return numerator / (2.0 * std::log(deg / (deg - n)));
}

template <Scalar T>
T wilson_R(const ChainParams& params) {
  const BigInt n(params.n());
  const BigInt deg(std::to_string(params.degree()));
  return ratio<T>(n * n, deg * deg);
}

template <Scalar T>
T wilson_variance(const ChainParams& params, int x) {
  if (x < 0 || x > params.d()) throw domain_error("shell index out of range 0..d");
  const BigInt n(params.n());
  const BigInt d(params.d());
  const BigInt deg(std::to_string(params.degree()));
  const BigInt num = n * n * (deg + BigInt(x) * (2 - params.n()));
  const BigInt den = d * deg * deg;
  return ratio<T>(num, den * (params.n() - 1));
}

double l2_upper_orthonormal_formula(double n, double d, double eps) {
  const double inner = (std::pow(4.0 * eps * eps + 1.0, 1.0 / d) - 1.0) / (n - 1.0);
  return -(d * (n - 1.0) / (2.0 * n)) * std::log(inner);
}

double l2_upper_paper(const ChainParams& params, double eps) {
  check_eps(eps);
  const double d = params.d();
  const double n = params.n();
  // expm1/log1p keep (1+4eps^2)^{1/d} - 1 accurate when d is large.
  const double inner = std::expm1(std::log1p(4.0 * eps * eps) / d);
  return -(d * (n - 1.0) / (2.0 * n)) * std::log(inner);
}

double l2_upper_orthonormal(const ChainParams& params, double eps) {
  check_eps(eps);
  const double d = params.d();
  const double n = params.n();
  const double inner = std::expm1(std::log1p(4.0 * eps * eps) / d);
  if (!(inner < n - 1.0)) {
    throw domain_error("orthonormal L2 bound needs (4eps^2+1)^{1/d} - 1 < n-1");
  }
  return -(d * (n - 1.0) / (2.0 * n)) * std::log(inner / (n - 1.0));
}

KimBounds kim_bounds(const ChainParams& params, double eps) {
  check_eps(eps);
  const double scale = static_cast<double>(params.degree()) / params.n();
  const double log_states = params.d() * std::log(static_cast<double>(params.n()));
  return {scale * std::log(1.0 / (2.0 * eps)), scale * (log_states - std::log(eps))};
}

long long mcleman_upper(const ChainParams& params, double eps) {
  check_eps(eps);
  if (params.d() < 2) throw domain_error("path-coupling bound needs d >= 2");
  const double d = params.d();
  const double n = params.n();
  const double contraction = std::log(d * (n - 1.0) / ((d - 1.0) * (n - 1.0) + 1.0));
  return static_cast<long long>(std::ceil(std::log(d / eps) / contraction));
}

CutoffConstants cutoff_constants(double eps) {
  check_eps(eps);
  return {(std::log((1.0 - eps) / eps) - 6.0 - std::log(2.0)) / 2.0,
          -0.5 * std::log(std::log1p(4.0 * eps * eps))};
}

double corrected_upper_constant(int n, double eps) {
  return cutoff_constants(eps).c_u + 0.5 * std::log(static_cast<double>(n - 1));
}

double cutoff_center(const ChainParams& params) {
  return static_cast<double>(params.degree()) / (2.0 * params.n()) * std::log(static_cast<double>(params.d()));
}

double cutoff_window(const ChainParams& params) {
  return static_cast<double>(params.degree()) / params.n();
}

bool lower_bound_holds(double bound, long long tmix) {
  return static_cast<double>(tmix) >= std::ceil(bound) - 1.0;
}

bool upper_bound_holds(double bound, long long tmix) {
  return static_cast<double>(tmix) <= std::floor(bound) + 1.0;
}

const BoundEntry& BoundsReport::entry(const std::string& name) const {
  for (const auto& b : bounds) {
    if (b.name == name) return b;
  }
  throw domain_error("no bound named " + name);
}

BoundsReport bounds_report_for(const ChainParams& params, double eps, std::optional<long long> tmix) {
  check_eps(eps);
  BoundsReport report{params, eps, tmix, {}, {}};

  auto add = [&](std::string name, std::string kind, auto&& compute) {
    BoundEntry entry{std::move(name), std::move(kind), std::nullopt, {}, std::nullopt};
    try {
      entry.value = compute();
    } catch (const domain_error& e) {
      entry.note = e.what();
    }
    if (entry.value && tmix) {
      entry.valid = entry.kind == "lower" ? lower_bound_holds(*entry.value, *tmix)
                                          : upper_bound_holds(*entry.value, *tmix);
    }
    report.bounds.push_back(std::move(entry));
  };

  add("wilson_lower", "lower", [&] { return wilson_lower(params, eps); });
  add("l2_upper_paper", "upper", [&] { return l2_upper_paper(params, eps); });
  report.bounds.back().note = "as stated; assumes phi_m(0)^2 <= C(d,m)";
  add("l2_upper_orthonormal", "upper", [&] { return l2_upper_orthonormal(params, eps); });
  const auto kim = kim_bounds(params, eps);
  add("kim_lower", "lower", [&] { return kim.lower; });
  if (eps >= 0.5) report.bounds.back().note = "not informative for eps >= 1/2";
  add("kim_upper", "upper", [&] { return kim.upper; });
  add("mcleman_upper", "upper", [&] { return static_cast<double>(mcleman_upper(params, eps)); });
  return report;
}

template <Scalar T>
BoundsReport bounds_report(const ChainParams& params, const Rational& eps, const MixingTimeOptions& options) {
  std::optional<long long> tmix;
  std::string note;
  try {
    if constexpr (is_exact_v<T>) {
      tmix = mixing_time<Rational>(params, eps, options);
    } else {
      tmix = mixing_time<double>(params, eps.get_d(), options);
    }
  } catch (const resource_error& e) {
    note = e.what();
  }
  auto report = bounds_report_for(params, eps.get_d(), tmix);
  report.tmix_note = std::move(note);
  return report;
}

template <Scalar T>
CutoffProfile cutoff_profile(int n, const std::vector<int>& d_values, const std::vector<Rational>& eps_values,
                             const MixingTimeOptions& options) {
  CutoffProfile profile{n, d_values, eps_values, {}};
  std::vector<T> thresholds;
  for (const auto& e : eps_values) {
    if (!(e > 0 && e < 1)) throw domain_error("eps must lie in (0,1), got " + format_scalar(e));
    if constexpr (is_exact_v<T>) {
      thresholds.push_back(e);
      thresholds.push_back(1 - e);
    } else {
      thresholds.push_back(e.get_d());
      thresholds.push_back(Rational(1 - e).get_d());
    }
  }
  for (int d : d_values) {
    const ChainParams params(n, d);
    const auto times = mixing_times<T>(params, thresholds, options);
    const double t_c = cutoff_center(params);
    const double w = cutoff_window(params);
    for (std::size_t i = 0; i < eps_values.size(); ++i) {
      CutoffRow row;
      row.n = n;
      row.d = d;
      row.eps = eps_values[i];
      row.tmix = times[2 * i];
      row.tmix_complement = times[2 * i + 1];
      row.t_c = t_c;
      row.w = w;
      row.u_low = (static_cast<double>(row.tmix) - 1.0 - t_c) / w;
      row.u_high = (static_cast<double>(row.tmix) - t_c) / w;
      row.ratio = make_rational(row.tmix_complement, row.tmix);
      const double eps = row.eps.get_d();
      const auto constants = cutoff_constants(eps);
      row.c_l = constants.c_l;
      row.c_u = constants.c_u;
      row.c_u_corrected = corrected_upper_constant(n, eps);
      row.window_low = t_c + row.c_l * w;
      row.window_high = t_c + row.c_u_corrected * w;
      row.in_window = lower_bound_holds(row.window_low, row.tmix) && upper_bound_holds(row.window_high, row.tmix);
      profile.rows.push_back(std::move(row));
    }
  }
  return profile;
}

std::vector<double> rescaled_tv(const ChainParams& params, const std::vector<double>& u_values) {
  const double t_c = cutoff_center(params);
  const double w = cutoff_window(params);
  std::vector<long long> times;
  long long t_max = 0;
  for (double u : u_values) {
    const long long t = std::max(0LL, std::llround(t_c + u * w));
    times.push_back(t);
    t_max = std::max(t_max, t);
  }
  const auto curve = tv_curve<double>(params, t_max);
  std::vector<double> out;
  for (long long t : times) out.push_back(curve.values[t]);
  return out;
}

template <Scalar T>
DiscrepancyReport<T> discrepancy_report(const ChainParams& params, long long t) {
  if (t < 0) throw domain_error("t must be >= 0");
  const auto spectral = build_spectral<T>(params);
  const auto& lambda = spectral.eigenvalues();
  const int d = params.d();
  const auto identity = l2_identity_check<T>(params, t);

  DiscrepancyReport<T> report{.params = params,
                              .t = t,
                              .four_tv_sq = identity.four_tv_sq,
                              .l2_lhs = identity.lhs,
                              .as_stated_sum = from_int<T>(0),
                              .orthonormal_sum = from_int<T>(0),
                              .literal_sum = from_int<T>(0)};
  for (int m = 1; m <= d; ++m) {
    const T decay = integer_power<T>(T(lambda[m] * lambda[m]), t);
    const BigInt claimed = binomial(d, m);
    report.as_stated_sum += from_integer<T>(claimed) * decay;
    report.orthonormal_sum += spectral.phi0_sq(m) * decay;
    report.literal_sum += decay;
    const T phi0 = spectral.phi0_sq(m);
    if (phi0 > from_integer<T>(claimed)) report.norm_violations.push_back({m, phi0, claimed});
  }
  report.as_stated_valid = report.four_tv_sq <= report.as_stated_sum;
  report.orthonormal_valid = report.four_tv_sq <= report.orthonormal_sum;
  report.literal_valid = report.four_tv_sq <= report.literal_sum;
  report.orthonormal_matches_lhs = close_enough(report.orthonormal_sum, report.l2_lhs);
  report.literal_matches_lhs = close_enough(report.literal_sum, report.l2_lhs);

  // ⟨K_m,K_m⟩ over the shell weights equals n^d C(d,m)(n-1)^m iff the
  // normalized row has π*-norm 1/(C(d,m)(n-1)^m), i.e. φ_m(0)^2 = C(d,m)(n-1)^m.
  report.norm_reading = "<K_m,K_m> = n^d * C(d,m) * (n-1)^m";
  report.norm_reading_verified = true;
  for (int m = 0; m <= d; ++m) {
    const BigInt expected = shell_size(params, m);
    bool ok = false;
    if constexpr (is_exact_v<T>) {
      ok = spectral.phi0_sq(m) == Rational(expected);
    } else {
      ok = std::abs(-std::log(spectral.normalized_norm_sq(m)) - log_big(expected)) <= 1e-9 * std::max(1.0, log_big(expected));
    }
    report.norm_reading_verified = report.norm_reading_verified && ok;
  }
  return report;
}

template Rational wilson_R<Rational>(const ChainParams&);
template double wilson_R<double>(const ChainParams&);
template Rational wilson_variance<Rational>(const ChainParams&, int);
template double wilson_variance<double>(const ChainParams&, int);
template BoundsReport bounds_report<Rational>(const ChainParams&, const Rational&, const MixingTimeOptions&);
template BoundsReport bounds_report<double>(const ChainParams&, const Rational&, const MixingTimeOptions&);
template CutoffProfile cutoff_profile<Rational>(int, const std::vector<int>&, const std::vector<Rational>&,
                                                const MixingTimeOptions&);
template CutoffProfile cutoff_profile<double>(int, const std::vector<int>&, const std::vector<Rational>&,
                                              const MixingTimeOptions&);
template DiscrepancyReport<Rational> discrepancy_report<Rational>(const ChainParams&, long long);
template DiscrepancyReport<double> discrepancy_report<double>(const ChainParams&, long long);

}  // namespace rookmix
