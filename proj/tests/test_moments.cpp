#include <doctest.h>

#include <cmath>

#include "btrm/errors.hpp"
#include "btrm/moments.hpp"
#include "oracles.hpp"

using namespace btrm;

namespace {
McOptions mc(std::uint64_t seed, std::uint64_t points = 1'000'000) { return McOptions{points, seed, 0}; }

bool within(const TheoreticalMoment& t, double expected, double sigmas = 3.0, double slack = 0.0) {
  return std::abs(t.value - expected) <= sigmas * t.std_error + slack;
}
}  // namespace

TEST_CASE("catalan numbers") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(2) == 2);
  CHECK(catalan(3) == 5);
  for (int k = 0; k <= 15; ++k) CHECK(catalan(k) == oracle::catalan_closed_form(k));
  CHECK_THROWS_AS(catalan(16), RangeError);
  CHECK_THROWS_AS(catalan(-1), RangeError);
}

TEST_CASE("semicircle moments") {
  CHECK(semicircle_moment(1) == 0.0);
  CHECK(semicircle_moment(4) == 2.0);
  CHECK(semicircle_moment(8) == 14.0);
  CHECK(semicircle_moment(0) == 1.0);
}

TEST_CASE("slow-growth band moments are exact rationals") {
  for (int m : {1, 2, 3, 5, 17}) {
    CHECK(*band_slow_moment(2, m).exact == Rational(1));
    CHECK(*band_slow_moment(4, m).exact == Rational(2) + Rational(1, m * m));
  }
  CHECK(*band_slow_moment(4, 2).exact == Rational(9, 4));
  CHECK(*band_slow_moment(4, 1).exact == Rational(3));
  CHECK(band_slow_moment(4, 2).std_error == 0.0);
  // m = 1: every pairing has weight 1
  for (int k = 1; k <= 6; ++k) CHECK(*band_slow_moment(2 * k, 1).exact == Rational(oracle::power(1, 0) * double_factorial_odd(k)));
}

TEST_CASE("slow-growth moments decrease to Catalan with a 1/m^2 gap") {
  for (int k = 1; k <= 4; ++k) {
    Rational previous = *band_slow_moment(2 * k, 1).exact;
    for (int m = 1; m <= 10; ++m) {
      const Rational v = *band_slow_moment(2 * k, m).exact;
      CHECK(v <= previous);
      CHECK(v >= Rational(catalan(k)));
      CHECK(v - Rational(catalan(k)) <= Rational(double_factorial_odd(k), m * m));
      CHECK(v <= Rational(double_factorial_odd(k)));
      previous = v;
    }
  }
}

TEST_CASE("toeplitz moments") {
  for (int m : {1, 2, 5}) CHECK(within(toeplitz_moment(2, m, mc(1)), 1.0));
  const auto m4 = toeplitz_moment(4, 1, mc(2));
  CHECK(within(m4, 8.0 / 3.0));
  CHECK(m4.terms.size() == 3);
  for (const auto& term : m4.terms) {
    CHECK(term.weight <= Rational(1));
    CHECK(term.integral->value <= 4.0);
  }
  // large m: crossing weight m^{-2} vanishes
  CHECK(within(toeplitz_moment(4, 1000, mc(3)), 2.0, 3.0, 1e-6));
}

TEST_CASE("toeplitz fourth moment matches the grid-oracle sum for m = 1, 2, 3") {
  double grid[3];
  const auto all = enumerate_pair_partitions(2);
  for (int i = 0; i < 3; ++i) grid[i] = oracle::grid_volume(all[static_cast<std::size_t>(i)], IntegrandKind::toeplitz, 1.0);
  for (int m : {1, 2, 3}) {
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) expected += std::pow(m, 2 - 1 - profile(all[static_cast<std::size_t>(i)]).f) * grid[i];
    CHECK(within(toeplitz_moment(4, m, mc(4)), expected, 3.0, 5e-3));
  }
}

TEST_CASE("band-proportional moments") {
  SUBCASE("b = 1 reproduces the full Toeplitz moment exactly") {
    for (int order : {2, 4, 6}) {
      const auto full = toeplitz_moment(order, 2, mc(9, 100'000));
      const auto band = band_proportional_moment(order, 2, 1.0, mc(9, 100'000));
      CHECK(full.value == band.value);
      CHECK(full.std_error == band.std_error);
    }
  }
  SUBCASE("second moment is one for every b") {
    for (double b : {0.1, 0.5, 0.9}) {
      for (int m : {1, 3}) CHECK(within(band_proportional_moment(2, m, b, mc(10)), 1.0));
    }
  }
  SUBCASE("fourth moment, m = 1, b = 1/2, against grid quadrature") {
    double sum = 0.0;
    for (const auto& pi : enumerate_pair_partitions(2)) sum += oracle::grid_volume(pi, IntegrandKind::toeplitz, 0.5);
    CHECK(within(band_proportional_moment(4, 1, 0.5, mc(11)), sum / (1.5 * 1.5), 3.0, 5e-3));
  }
  CHECK_THROWS_AS(band_proportional_moment(4, 1, 0.0, mc(1)), RangeError);
  CHECK_THROWS_AS(band_proportional_moment(4, 1, 1.2, mc(1)), RangeError);
}

TEST_CASE("index tuple counts r(m, pi)") {
  for (const auto& pi : enumerate_pair_partitions(2)) CHECK(count_index_tuples(pi, 1) == 1);
  CHECK(count_index_tuples(PairPartition({{1, 2}}), 2) == 4);
  // crossing: t1 = t3, t2 = t4 arbitrary, so r = m^2 while m^{2k-f} = m
  CHECK(count_index_tuples(PairPartition({{1, 3}, {2, 4}}), 3) == 9);
  // noncrossing k = 2: exactly m^3
  for (int m = 1; m <= 5; ++m) {
    CHECK(count_index_tuples(PairPartition({{1, 2}, {3, 4}}), m) == oracle::power(m, 3));
    CHECK(count_index_tuples(PairPartition({{1, 4}, {2, 3}}), m) == oracle::power(m, 3));
  }
  CHECK_THROWS_AS(count_index_tuples(PairPartition({{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}}), 6), CapacityError);
}

TEST_CASE("r(m, pi) = m^{2k-f} + O(m^k)") {
  for (int k = 1; k <= 3; ++k) {
    for (const auto& pi : enumerate_pair_partitions(k)) {
      const int f = profile(pi).f;
      for (int m = 2; m <= 5; ++m) {
        const auto r = count_index_tuples(pi, m);
        const auto lead = oracle::power(m, 2 * k - f);
        CHECK(r >= lead);
        CHECK(r - lead <= double_factorial_odd(k) * oracle::power(m, k));
      }
    }
  }
}

TEST_CASE("hankel moments") {
  for (int m : {1, 2, 4}) CHECK(within(hankel_moment(2, m, mc(12)), 1.0));
  // Both pairings in P2^1(4) are noncrossing with r = m^3, so m_4 = 2 for every m.
  double grid = 0.0;
  for (const auto& pi : enumerate_pair_partitions(2)) {
    if (is_parity_alternating(pi)) grid += oracle::grid_volume(pi, IntegrandKind::hankel, 1.0);
  }
  CHECK(std::abs(grid - 2.0) < 5e-3);
  for (int m : {1, 2, 3}) {
    const auto t = hankel_moment(4, m, mc(13));
    CHECK(within(t, 2.0));
    CHECK(t.terms.size() == 2);
    CHECK_FALSE(t.leading_term_fallback);
  }
  const auto fallback = hankel_moment(8, 8, mc(14, 1000));
  CHECK(fallback.leading_term_fallback);
  CHECK(fallback.terms.size() == oracle::factorial(4));
}

TEST_CASE("symmetric-block Toeplitz moments") {
  for (int m : {1, 3}) CHECK(within(symmetric_block_moment(2, m, mc(15)), 1.0));
  CHECK(within(symmetric_block_moment(4, 1, mc(16)), 8.0 / 3.0));
  // crossing weight r/m^3 = 1/m
  for (int m : {4, 16, 50}) {
    const auto t = symmetric_block_moment(4, m, mc(17));
    CHECK(within(t, 2.0 + (2.0 / 3.0) / m, 3.0, 5e-3 / m));
  }
}

TEST_CASE("dispatch: orders 0 and odd are exact") {
  for (auto tag : {ModelTag::toeplitz, ModelTag::hankel, ModelTag::band_slow, ModelTag::symmetric_block_toeplitz,
                   ModelTag::semicircle}) {
    const ModelKind model{tag, 3, std::nullopt};
    CHECK(theoretical_moment(model, 0, mc(1)).value == 1.0);
    for (int order : {1, 3, 5, 13}) {
      const auto t = theoretical_moment(model, order, mc(1));
      CHECK(t.value == 0.0);
      CHECK(t.std_error == 0.0);
    }
  }
  CHECK(theoretical_moment({ModelTag::semicircle, 1, std::nullopt}, 6, mc(1)).value == 5.0);
  CHECK(theoretical_moment({ModelTag::band_proportional, 1, 0.5}, 3, mc(1)).value == 0.0);
}

TEST_CASE("model validation and order caps") {
  CHECK_THROWS_AS(theoretical_moment({ModelTag::band_proportional, 1, std::nullopt}, 4, mc(1)), RangeError);
  CHECK_THROWS_AS(theoretical_moment({ModelTag::toeplitz, 1, 0.5}, 4, mc(1)), RangeError);
  CHECK_THROWS_AS(theoretical_moment({ModelTag::toeplitz, 0, std::nullopt}, 4, mc(1)), RangeError);
  CHECK_THROWS_AS(toeplitz_moment(14, 1, mc(1)), CapacityError);
  CHECK_THROWS_AS(band_slow_moment(3, 1), RangeError);
  CHECK(parse_model_tag("band_slow") == ModelTag::band_slow);
  CHECK(parse_model_tag("symmetric-block") == ModelTag::symmetric_block_toeplitz);
  CHECK_THROWS_AS(parse_model_tag("wigner"), RangeError);
}

TEST_CASE("moment estimates do not depend on the worker count") {
  auto one = toeplitz_moment(6, 2, McOptions{50'000, 77, 1});
  auto many = toeplitz_moment(6, 2, McOptions{50'000, 77, 5});
  CHECK(one.value == many.value);
  CHECK(one.std_error == many.std_error);
}
