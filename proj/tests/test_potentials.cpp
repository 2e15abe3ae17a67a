#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "kpband/potentials.hpp"

using namespace kpband;
using Catch::Approx;

namespace {

int count_equal(const std::vector<double>& v, double x) {
  return static_cast<int>(std::count(v.begin(), v.end(), x));
}

}  // namespace

TEST_CASE("grid geometry", "[grid]") {
  const GridSpec g(10000, 12.0);
  CHECK(g.step() == Approx(12.0 / 10000));
  CHECK(g.points_per_period() == 10000);
  CHECK(g.coordinate(10000) == Approx(12.0));

  const auto six = GridSpec::for_period(12.0, 100, 6);
  CHECK(six.n_points() == 600);
  CHECK(six.box_length() == 72.0);
  CHECK(six.period() == 12.0);
  CHECK(six.step() == six.period() / 100);
}

TEST_CASE("grid rejects invalid layouts", "[grid]") {
  CHECK_THROWS_AS(GridSpec(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(10, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(12, 1.0, 0), std::invalid_argument);
}

TEST_CASE("parameter validation", "[params]") {
  CHECK_NOTHROW(KronigPenneyParams{0.5, 10, 2}.validate());
  CHECK_NOTHROW(KronigPenneyParams{0.0, 10, 0}.validate());
  CHECK_THROWS_AS((KronigPenneyParams{-1, 10, 2}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((KronigPenneyParams{0.5, 0, 2}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((KronigPenneyParams{0.5, 10, -1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DiracCombParams{-1, 12}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DiracCombParams{1, 0}.validate()), std::invalid_argument);
  CHECK(period_of(KronigPenneyParams{0.5, 10, 2}) == 12.0);
}

TEST_CASE("KP point sampling uses the half-open barrier [0, b)", "[kp]") {
  // x_i = i, the barrier covers x = 1 and x = 12 (folded onto 0); x = 2 is well
  const auto pot = sample_kp({0.5, 10, 2}, GridSpec(12, 12.0));
  std::vector<double> expected(12, 0.0);
  expected[0] = 0.5;
  expected[11] = 0.5;
  CHECK(pot.values == expected);
  CHECK(count_equal(pot.values, 0.5) == 2);
}

TEST_CASE("KP barrier count at N = 10000", "[kp]") {
  const GridSpec g(10000, 12.0);
  const auto pot = sample_kp({0.5, 10, 2}, g);
  int brute = 0;
  for (int i = 1; i <= 10000; ++i) {
    const double x = (i % 10000) * g.step();
    if (x < 2.0) ++brute;
  }
  const int n = count_equal(pot.values, 0.5);
  CHECK(n == brute);
  CHECK((n == 1666 || n == 1667));
  CHECK(std::abs(n * g.step() - 2.0) <= g.step());
}

TEST_CASE("KP with zero height is identically zero", "[kp]") {
  for (double b : {0.0, 1.0, 5.5}) {
    const auto pot = sample_kp({0.0, 12.0 - b, b}, GridSpec(48, 12.0));
    CHECK(count_equal(pot.values, 0.0) == 48);
  }
}

TEST_CASE("KP sampling repeats across periods", "[kp]") {
  const auto one = sample_kp({0.7, 9, 3}, GridSpec(30, 12.0));
  const auto four = sample_kp({0.7, 9, 3}, GridSpec::for_period(12.0, 30, 4));
  for (int i = 0; i < 120; ++i) CHECK(four.values[static_cast<std::size_t>(i)] == one.values[static_cast<std::size_t>(i % 30)]);
}

TEST_CASE("KP cell averages integrate the barrier exactly", "[kp]") {
  for (int n : {7, 50, 1250, 2501}) {
    const GridSpec g(n, 12.0);
    const auto pot = sample_kp({0.5, 10, 2}, g, Sampling::cell_average);
    const double area = g.step() * std::accumulate(pot.values.begin(), pot.values.end(), 0.0);
    CHECK(area == Approx(0.5 * 2.0).epsilon(1e-12));
    for (double v : pot.values) CHECK((v >= 0.0 && v <= 0.5));
  }
}

TEST_CASE("KP rejects a box that is not whole periods", "[kp]") {
  CHECK_THROWS_AS(sample_kp({0.5, 10, 2}, GridSpec(12, 13.0)), std::invalid_argument);
  CHECK_THROWS_AS(sample_kp({0.5, 10, 2}, GridSpec(24, 24.0, 1)), std::invalid_argument);
  CHECK_NOTHROW(sample_kp({0.5, 10, 2}, GridSpec(24, 24.0, 2)));
}

TEST_CASE("comb charges the cell origin with alpha / h", "[comb]") {
  const auto small = sample_comb({1.0, 12.0}, GridSpec(12, 12.0));
  CHECK(count_equal(small.values, 0.0) == 11);
  CHECK(small.values[11] == 1.0);

  const auto zero = sample_comb({0.0, 12.0}, GridSpec(12, 12.0));
  CHECK(count_equal(zero.values, 0.0) == 12);

  const GridSpec g(10000, 12.0);
  const auto big = sample_comb({1.0, 12.0}, g);
  CHECK(count_equal(big.values, 0.0) == 9999);
  CHECK(big.values.back() == Approx(10000.0 / 12.0));
  CHECK(g.step() * std::accumulate(big.values.begin(), big.values.end(), 0.0) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("comb strength sums to one alpha per period", "[comb]") {
  const auto g = GridSpec::for_period(7.5, 333, 5);
  const auto pot = sample_comb({2.5, 7.5}, g);
  CHECK(count_equal(pot.values, 0.0) == 5 * 332);
  CHECK(g.step() * std::accumulate(pot.values.begin(), pot.values.end(), 0.0) == Approx(5 * 2.5).epsilon(1e-14));
}

TEST_CASE("sample dispatches on the variant", "[sample]") {
  const GridSpec g(12, 12.0);
  CHECK(sample(KronigPenneyParams{0.5, 10, 2}, g).values == sample_kp({0.5, 10, 2}, g).values);
  CHECK(sample(DiracCombParams{1.0, 12.0}, g).values == sample_comb({1.0, 12.0}, g).values);
}

TEST_CASE("cyclic shift permutes values", "[sample]") {
  const auto pot = sample_kp({0.5, 10, 2}, GridSpec(12, 12.0));
  for (int s : {-13, -1, 0, 1, 5, 12, 25}) {
    const auto shifted = cyclic_shift(pot, s);
    for (int i = 0; i < 12; ++i) {
      const int j = ((i + s) % 12 + 12) % 12;
      CHECK(shifted.values[static_cast<std::size_t>(i)] == pot.values[static_cast<std::size_t>(j)]);
    }
    auto a = pot.values;
    auto b = shifted.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}
