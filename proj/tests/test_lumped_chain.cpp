#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "rookmix/lumped_chain.hpp"
#include "rookmix/spectral.hpp"

using namespace rookmix;

namespace {

std::vector<Rational> parse_all(std::initializer_list<const char*> values) {
  std::vector<Rational> out;
  for (const char* v : values) out.push_back(parse_rational(v));
  return out;
}

}  // namespace

TEST_CASE("kernel entries for n=3, d=2") {
  const auto k = build_kernel<Rational>(ChainParams(3, 2));
  CHECK(k.up == std::vector<Rational>{Rational(1), make_rational(1, 2), Rational(0)});
  CHECK(k.down == std::vector<Rational>{Rational(0), make_rational(1, 4), make_rational(1, 2)});
  CHECK(k.stay == std::vector<Rational>{Rational(0), make_rational(1, 4), make_rational(1, 2)});
  CHECK(k.entry(0, 1) == 1);
  CHECK(k.entry(2, 1) == make_rational(1, 2));
  CHECK(k.entry(0, 2) == 0);
}

TEST_CASE("kernel rows are stochastic") {
  for (int n : {3, 4, 7}) {
    for (int d : {1, 2, 5, 17}) {
      const auto k = build_kernel<Rational>(ChainParams(n, d));
      for (int x = 0; x <= d; ++x) CHECK(k.up[x] + k.down[x] + k.stay[x] == 1);
      CHECK(k.up[d] == 0);
      CHECK(k.down[0] == 0);
    }
  }
}

TEST_CASE("exact curve for n=3, d=2") {
  const auto curve = tv_curve<Rational>(ChainParams(3, 2), 2);
  CHECK(curve.values == parse_all({"8/9", "5/9", "7/36"}));
}

TEST_CASE("frozen exact curves") {
  // Values computed by an independent rational evolution and by dense matrix powers.
  CHECK(tv_curve<Rational>(ChainParams(3, 3), 4).values == parse_all({"26/27", "7/9", "19/54", "7/36", "19/216"}));
  CHECK(tv_curve<Rational>(ChainParams(4, 2), 3).values == parse_all({"15/16", "5/8", "5/48", "5/72"}));
  CHECK(tv_curve<Rational>(ChainParams(5, 3), 2).values == parse_all({"124/125", "113/125", "64/125"}));
}

TEST_CASE("lumped curve equals the dense full-chain matrix-power oracle") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {3, 3}, {4, 2}, {5, 2}, {3, 4}}) {
    CAPTURE(n);
    CAPTURE(d);
    const auto oracle_curve = oracle::dense_tv_curve(n, d, 8);
    const auto curve = tv_curve<Rational>(ChainParams(n, d), 8);
    REQUIRE(curve.values.size() == oracle_curve.size());
    for (std::size_t t = 0; t < curve.values.size(); ++t) CHECK(curve.values[t] == oracle_curve[t]);
  }
}

TEST_CASE("scaled exact evolution agrees with rational step-by-step evolution") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 7}, {6, 4}, {4, 12}}) {
    LumpedEvolution<Rational> evo(ChainParams(n, d));
    const auto curve = tv_curve<Rational>(ChainParams(n, d), 30);
    for (long long t = 0; t <= 30; ++t) {
      CHECK(curve.values[t] == evo.distance());
      evo.advance();
    }
  }
}

TEST_CASE("float curve tracks the exact curve") {
  const ChainParams p(3, 2);
  const auto exact = tv_curve<Rational>(p, 2);
  const auto approx = tv_curve<double>(p, 2);
  for (std::size_t t = 0; t < 3; ++t) CHECK(std::abs(approx.values[t] - exact.values[t].get_d()) <= 1e-12);
  const ChainParams q(5, 40);
  const auto e2 = tv_curve<Rational>(q, 60);
  const auto f2 = tv_curve<double>(q, 60);
  for (std::size_t t = 0; t <= 60; ++t) CHECK(std::abs(f2.values[t] - e2.values[t].get_d()) <= 1e-12);
}

TEST_CASE("t_max = 0 gives the single starting value") {
  const auto curve = tv_curve<Rational>(ChainParams(3, 2), 0);
  REQUIRE(curve.values.size() == 1);
  CHECK(curve.values[0] == make_rational(8, 9));
  CHECK_THROWS_AS(tv_curve<Rational>(ChainParams(3, 2), -1), domain_error);
}

TEST_CASE("spectral curve equals the evolved curve") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 2}, {4, 5}, {5, 7}}) {
    const ChainParams p(n, d);
    const auto direct = tv_curve<Rational>(p, 12);
    const auto spectral = spectral_tv_curve<Rational>(p, 12, build_spectral<Rational>(p));
    CHECK(direct.values == spectral.values);
  }
  // Float cancellation grows like 3^{d/2}, so keep d moderate.
  const ChainParams mid(3, 16);
  const auto direct = tv_curve<double>(mid, 100);
  const auto spectral = spectral_tv_curve<double>(mid, 100, build_spectral<double>(mid));
  for (std::size_t t = 0; t <= 100; ++t) CHECK(std::abs(direct.values[t] - spectral.values[t]) <= 1e-9);
}

TEST_CASE("mixing time at n=3, d=2") {
  CHECK(mixing_time<Rational>(ChainParams(3, 2), make_rational(1, 4)) == 2);
  CHECK(mixing_time<double>(ChainParams(3, 2), 0.25) == 2);
}

TEST_CASE("frozen mixing times, small boards") {
  // (eps = 1/4, eps = 1/20) for d = 2..10, from an independent integer evolution.
  const std::map<int, std::vector<std::pair<int, int>>> table = {
      {3, {{2, 5}, {3, 5}, {3, 7}, {5, 10}, {6, 12}, {8, 15}, {9, 17}, {11, 20}, {13, 23}}},
      {4, {{2, 4}, {3, 6}, {5, 8}, {6, 12}, {8, 15}, {10, 18}, {12, 20}, {14, 24}, {15, 27}}},
      {5, {{2, 4}, {4, 7}, {5, 10}, {7, 13}, {9, 16}, {11, 20}, {13, 23}, {15, 26}, {18, 30}}},
  };
  const std::vector<Rational> eps = {make_rational(1, 4), make_rational(1, 20)};
  for (const auto& [n, rows] : table) {
    for (int d = 2; d <= 10; ++d) {
      CAPTURE(n);
      CAPTURE(d);
      const auto times = mixing_times<Rational>(ChainParams(n, d), eps);
      CHECK(times[0] == rows[d - 2].first);
      CHECK(times[1] == rows[d - 2].second);
    }
  }
}

TEST_CASE("frozen mixing times, n=3 large d") {
  const std::vector<Rational> eps = parse_all({"1/10", "1/4", "1/2", "3/4", "9/10"});
  const std::map<int, std::vector<long long>> table = {
      {10, {18, 13, 8, 6, 5}},
      {50, {121, 91, 66, 50, 39}},
      {100, {267, 205, 156, 121, 98}},
      {200, {582, 458, 358, 288, 241}},
      {400, {1257, 1009, 809, 667, 573}},
  };
  for (const auto& [d, expected] : table) {
    CAPTURE(d);
    CHECK(mixing_times<Rational>(ChainParams(3, d), eps) == expected);
    std::vector<double> feps;
    for (const auto& e : eps) feps.push_back(e.get_d());
    CHECK(mixing_times<double>(ChainParams(3, d), feps) == expected);
  }
}

TEST_CASE("mixing_time argument and horizon errors") {
  const ChainParams p(3, 10);
  CHECK_THROWS_AS(mixing_time<Rational>(p, Rational(0)), domain_error);
  CHECK_THROWS_AS(mixing_time<Rational>(p, Rational(1)), domain_error);
  CHECK_THROWS_AS(mixing_time<double>(p, -0.1), domain_error);
  MixingTimeOptions tight;
  tight.initial_horizon = 2;
  tight.max_horizon = 8;
  CHECK_THROWS_AS(mixing_time<Rational>(p, make_rational(1, 4), tight), resource_error);
  MixingTimeOptions enough;
  enough.initial_horizon = 1;
  enough.max_horizon = 13;
  CHECK(mixing_time<Rational>(p, make_rational(1, 4), enough) == 13);
}
