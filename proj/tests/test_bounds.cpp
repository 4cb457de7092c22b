#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rookmix/bounds.hpp"
#include "rookmix/full_chain.hpp"
#include "rookmix/krawtchouk.hpp"

using namespace rookmix;

namespace {

// Reference values computed with 40-digit arithmetic from the closed forms.
bool close(double a, double b, double rel = 1e-13) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("Wilson lower bound") {
  CHECK(close(wilson_lower(ChainParams(3, 10), 0.25), 7.0840519935419921));
  CHECK(close(wilson_lower(ChainParams(5, 50), 0.05), 117.31211597003989));
  CHECK(close(wilson_lower(ChainParams(10, 200), 0.25), 502.45707127657055));
  // the log((1-eps)/eps) term vanishes at eps = 1/2
  const ChainParams p(4, 9);
  const double deg = 27.0;
  CHECK(close(wilson_lower(p, 0.5), std::log(deg / 8.0) / (2.0 * std::log(deg / (deg - 4.0)))));
  CHECK(wilson_lower(ChainParams(3, 10), 0.999) < wilson_lower(ChainParams(3, 10), 0.5));
}

TEST_CASE("Wilson precondition") {
  CHECK_FALSE(wilson_applicable(ChainParams(3, 2)));
  CHECK_FALSE(wilson_applicable(ChainParams(3, 3)));  // d(n-1) = 2n exactly
  CHECK(wilson_applicable(ChainParams(3, 4)));
  CHECK_THROWS_AS(wilson_lower(ChainParams(3, 3), 0.25), precondition_error);
  try {
    wilson_lower(ChainParams(3, 2), 0.25);
  } catch (const precondition_error& e) {
    CHECK(std::string(e.what()).find("d(n-1) > 2n") != std::string::npos);
  }
  CHECK_THROWS_AS(wilson_lower(ChainParams(3, 10), 1.0), domain_error);
}

TEST_CASE("Wilson variance closed form") {
  CHECK(wilson_R<Rational>(ChainParams(3, 2)) == make_rational(9, 16));
  CHECK(wilson_R<Rational>(ChainParams(3, 10)) == make_rational(9, 400));
  CHECK(wilson_variance<Rational>(ChainParams(3, 2), 0) == make_rational(9, 16));
  for (int n : {3, 4, 9}) {
    for (int d : {1, 2, 10, 33}) {
      const ChainParams p(n, d);
      const Rational R = wilson_R<Rational>(p);
      CHECK(wilson_variance<Rational>(p, 0) == R);
      for (int x = 1; x <= d; ++x) {
        CHECK(wilson_variance<Rational>(p, x) < wilson_variance<Rational>(p, x - 1));
        CHECK(wilson_variance<Rational>(p, x) < R);
      }
      CHECK(wilson_variance<double>(p, d) == doctest::Approx(wilson_variance<Rational>(p, d).get_d()));
    }
  }
  CHECK_THROWS_AS(wilson_variance<Rational>(ChainParams(3, 2), 3), domain_error);
}

TEST_CASE("Wilson variance equals the full-chain expectation on every square") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 3}, {4, 2}, {5, 3}, {3, 5}}) {
    const ChainParams p(n, d);
    const auto table = KrawtchoukTable<Rational>::build(p);
    const Rational step = make_rational(1, p.degree());
    const StateIndexer idx(p);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto z = idx.decode(i);
      const int x = idx.shell_of(i);
      const Rational phi_x = table.normalized(1, x);
      Rational expectation = 0;
      for (int axis = 0; axis < d; ++axis) {
        for (int v = 1; v <= n; ++v) {
          if (v == z.coords[axis]) continue;
          auto w = z;
          w.coords[axis] = v;
          const Rational diff = table.normalized(1, idx.shell_of(idx.encode(w))) - phi_x;
          expectation += step * diff * diff;
        }
      }
      CHECK(expectation == wilson_variance<Rational>(p, x));
    }
  }
}

TEST_CASE("L2 upper bounds") {
  CHECK(close(l2_upper_paper(ChainParams(3, 10), 0.25), 12.637823850573555));
  CHECK(close(l2_upper_orthonormal(ChainParams(3, 10), 0.25), 14.948314452440039));
  CHECK(close(l2_upper_paper(ChainParams(3, 2), 0.25), 1.4245217704925038));
  CHECK(close(l2_upper_orthonormal(ChainParams(3, 2), 0.25), 1.8866198908658006));
  CHECK(close(l2_upper_paper(ChainParams(5, 50), 0.05), 170.44145954518476));
  CHECK(close(l2_upper_orthonormal(ChainParams(10, 200), 0.25), 809.54316179079588));
  // d = 1 reduces to -((n-1)/2n) log(4 eps^2)
  CHECK(close(l2_upper_paper(ChainParams(3, 1), 0.25), -(2.0 / 6.0) * std::log(0.25)));
}

TEST_CASE("orthonormal minus as-stated is (d(n-1)/2n) log(n-1)") {
  for (int n : {3, 5, 10}) {
    for (int d : {2, 5, 50, 200}) {
      for (double eps : {0.05, 0.25, 0.45}) {
        const ChainParams p(n, d);
        const double gap = l2_upper_orthonormal(p, eps) - l2_upper_paper(p, eps);
        CHECK(close(gap, d * (n - 1.0) / (2.0 * n) * std::log(n - 1.0), 1e-9));
      }
    }
  }
}

TEST_CASE("with n = 2 the orthonormal formula is the as-stated formula") {
  for (double d : {1.0, 3.0, 40.0}) {
    for (double eps : {0.1, 0.3}) {
      const double stated = -(d / 4.0) * std::log(std::pow(4.0 * eps * eps + 1.0, 1.0 / d) - 1.0);
      CHECK(close(l2_upper_orthonormal_formula(2.0, d, eps), stated, 1e-12));
    }
  }
}

TEST_CASE("orthonormal bound precondition") {
  // d = 1, n = 3: needs 4 eps^2 < 2
  CHECK_NOTHROW(l2_upper_orthonormal(ChainParams(3, 1), 0.7));
  CHECK_THROWS_AS(l2_upper_orthonormal(ChainParams(3, 1), 0.75), domain_error);
}

TEST_CASE("Kim bounds") {
  const auto k = kim_bounds(ChainParams(3, 2), 0.25);
  CHECK(close(k.lower, 0.92419624074659375));
  CHECK(close(k.upper, 4.7780252512748133));
  const auto k2 = kim_bounds(ChainParams(3, 10), 0.25);
  CHECK(close(k2.lower, 4.6209812037329687));
  CHECK(close(k2.upper, 82.482781652006584));
  CHECK(kim_bounds(ChainParams(7, 9), 0.5).lower == 0.0);
  // upper/lower = log(n^d/eps)/log(1/2eps)
  const auto k3 = kim_bounds(ChainParams(4, 30), 0.1);
  CHECK(close(k3.upper / k3.lower, (30 * std::log(4.0) - std::log(0.1)) / std::log(5.0), 1e-12));
}

TEST_CASE("path-coupling bound") {
  CHECK(mcleman_upper(ChainParams(3, 2), 0.25) == 8);
  CHECK(mcleman_upper(ChainParams(3, 10), 0.25) == 72);
  CHECK(mcleman_upper(ChainParams(5, 50), 0.05) == 458);
  CHECK(mcleman_upper(ChainParams(10, 200), 0.25) == 1501);
  CHECK_THROWS_AS(mcleman_upper(ChainParams(3, 1), 0.25), domain_error);
  // contraction log(d(n-1)/(d(n-1)-(n-2))) ~ (n-2)/(d(n-1)), so the ratio to
  // (d(n-1)/n) log(d/eps) tends to n/(n-2)
  for (int n : {3, 6, 10}) {
    const ChainParams p(n, 10000);
    const double scale = 10000.0 * (n - 1) / n * std::log(10000.0 / 0.25);
    CHECK(std::abs(mcleman_upper(p, 0.25) / scale - n / (n - 2.0)) <= 1e-3);
  }
}

TEST_CASE("cutoff constants") {
  const auto c = cutoff_constants(0.25);
  CHECK(close(c.c_l, -2.7972674459459178));
  CHECK(close(c.c_u, 0.74996999337975778));
  CHECK(close(cutoff_constants(0.5).c_u, 0.18325646029083216));
  CHECK(close(cutoff_constants(0.1).c_l, -2.247961301611863));
  for (double eps = 0.05; eps < 0.95; eps += 0.05) {
    CHECK(cutoff_constants(eps + 0.01).c_l < cutoff_constants(eps).c_l);
    CHECK(cutoff_constants(eps + 0.01).c_u < cutoff_constants(eps).c_u);
  }
  CHECK(close(corrected_upper_constant(3, 0.25), 0.74996999337975778 + 0.5 * std::log(2.0)));
  CHECK(corrected_upper_constant(2 + 1, 0.5) > cutoff_constants(0.5).c_u);
  CHECK(close(cutoff_center(ChainParams(3, 400)), 800.0 / 6.0 * std::log(400.0)));
  CHECK(close(cutoff_window(ChainParams(3, 400)), 800.0 / 3.0));
}

TEST_CASE("discretization convention") {
  CHECK(lower_bound_holds(7.08, 7));
  CHECK(lower_bound_holds(8.5, 8));
  CHECK_FALSE(lower_bound_holds(8.5, 7));
  CHECK(upper_bound_holds(12.64, 13));
  CHECK_FALSE(upper_bound_holds(12.64, 14));
  CHECK(upper_bound_holds(8.0, 9));
}

TEST_CASE("bounds report") {
  const auto r = bounds_report<Rational>(ChainParams(3, 10), make_rational(1, 4));
  REQUIRE(r.exact_tmix);
  CHECK(*r.exact_tmix == 13);
  CHECK(close(*r.entry("wilson_lower").value, 7.0840519935419921));
  CHECK(*r.entry("wilson_lower").valid);
  CHECK(*r.entry("l2_upper_orthonormal").valid);
  CHECK(*r.entry("mcleman_upper").value == 72.0);
  CHECK_THROWS_AS(r.entry("nonsense"), domain_error);

  const auto small = bounds_report<Rational>(ChainParams(3, 2), make_rational(1, 4));
  CHECK(*small.exact_tmix == 2);
  CHECK_FALSE(small.entry("wilson_lower").value);
  CHECK(small.entry("wilson_lower").note.find("2n") != std::string::npos);
  CHECK_FALSE(small.entry("wilson_lower").valid);
  CHECK(*small.entry("mcleman_upper").value == 8.0);

  const auto edge = bounds_report<double>(ChainParams(3, 10), parse_rational("0.999"));
  CHECK(*edge.exact_tmix >= 0);
  CHECK(std::isfinite(*edge.entry("wilson_lower").value));
  CHECK(*edge.entry("wilson_lower").value < 0);

  const auto none = bounds_report_for(ChainParams(3, 10), 0.25, std::nullopt);
  for (const auto& b : none.bounds) CHECK_FALSE(b.valid);

  MixingTimeOptions tight;
  tight.max_horizon = 4;
  const auto capped = bounds_report<Rational>(ChainParams(3, 10), make_rational(1, 4), tight);
  CHECK_FALSE(capped.exact_tmix);
  CHECK_FALSE(capped.tmix_note.empty());
}

TEST_CASE("cutoff profile") {
  const std::vector<Rational> eps = {make_rational(1, 10), make_rational(1, 4), make_rational(1, 2),
                                     make_rational(9, 10)};
  const auto profile = cutoff_profile<Rational>(3, {10, 50, 200}, eps);
  REQUIRE(profile.rows.size() == 12);
  const auto& r = profile.rows[1 * 4 + 1];  // d = 50, eps = 1/4
  CHECK(r.d == 50);
  CHECK(r.tmix == 91);
  CHECK(r.tmix_complement == 50);
  CHECK(r.ratio == make_rational(50, 91));
  for (const auto& row : profile.rows) {
    if (row.eps == make_rational(1, 2)) {
      CHECK(row.ratio == 1);
      CHECK(std::abs(row.u_high) < 0.05);
    }
    CHECK(row.u_high - row.u_low == doctest::Approx(1.0 / row.w));
    CHECK(row.in_window);
  }
  for (int k = 0; k < 3; ++k) {
    // u is positive for small eps and negative for large eps
    CHECK(profile.rows[k * 4 + 0].u_low > 0);
    CHECK(profile.rows[k * 4 + 3].u_high < 0);
  }
  const auto approx = cutoff_profile<double>(3, {10, 50, 200}, eps);
  for (std::size_t i = 0; i < profile.rows.size(); ++i) CHECK(approx.rows[i].tmix == profile.rows[i].tmix);
}

TEST_CASE("rescaled curves collapse") {
  std::vector<double> u;
  for (double v = -1.0; v <= 2.0; v += 0.25) u.push_back(v);
  const auto a = rescaled_tv(ChainParams(3, 100), u);
  const auto b = rescaled_tv(ChainParams(3, 400), u);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 0.15);
}

TEST_CASE("discrepancy report at n=3, d=2, t=1") {
  const auto r = discrepancy_report<Rational>(ChainParams(3, 2), 1);
  CHECK(r.four_tv_sq == make_rational(100, 81));
  CHECK(r.as_stated_sum == make_rational(3, 8));
  CHECK(r.orthonormal_sum == make_rational(5, 4));
  CHECK(r.literal_sum == make_rational(5, 16));
  CHECK(r.l2_lhs == make_rational(5, 4));
  CHECK_FALSE(r.as_stated_valid);
  CHECK(r.orthonormal_valid);
  CHECK_FALSE(r.literal_valid);
  CHECK(r.orthonormal_matches_lhs);
  CHECK_FALSE(r.literal_matches_lhs);
  REQUIRE(r.norm_violations.size() == 2);
  CHECK(r.norm_violations[0].m == 1);
  CHECK(r.norm_violations[0].phi0_sq == 4);
  CHECK(r.norm_violations[0].claimed == 2);
  CHECK(r.norm_reading_verified);

  const auto f = discrepancy_report<double>(ChainParams(3, 2), 1);
  CHECK(f.four_tv_sq == doctest::Approx(100.0 / 81.0));
  CHECK(f.orthonormal_sum == doctest::Approx(1.25));
  CHECK(f.norm_reading_verified);
  CHECK(discrepancy_report<double>(ChainParams(10, 300), 50).norm_reading_verified);
}
