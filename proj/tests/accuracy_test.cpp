#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "dfsopt/accuracy.hpp"
#include "dfsopt/error.hpp"
#include "support/fixtures.hpp"

using namespace dfsopt;
using doctest::Approx;
using testing::make_player;

namespace {

// Hand-worked: differences 9, 16, 0, 16; the last row has no actual.
Slate four_rows() {
  Slate s;
  s.players = {make_player("a", "X", "OF", 3000, 10, 7), make_player("b", "X", "OF", 4000, 5, 9),
               make_player("c", "X", "OF", 2000, 8, 8), make_player("d", "X", "OF", 3500, 2, 6),
               make_player("e", "X", "OF", 9000, 30)};
  return s;
}

void check_stats(const ColumnStats& s, double mean, double std, double min, double q25,
                 double median, double q75, double max) {
  CHECK(s.mean == Approx(mean).epsilon(1e-12));
  CHECK(s.std == Approx(std).epsilon(1e-12));
  CHECK(s.min == Approx(min));
  CHECK(s.q25 == Approx(q25).epsilon(1e-12));
  CHECK(s.median == Approx(median).epsilon(1e-12));
  CHECK(s.q75 == Approx(q75).epsilon(1e-12));
  CHECK(s.max == Approx(max));
}

Slate random_slate(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> proj(0, 25);
  std::normal_distribution<double> noise(0, 8);
  Slate s;
  for (int i = 0; i < n; ++i) {
    const double p = std::round(proj(rng) * 10) / 10;
    s.players.push_back(make_player("r" + std::to_string(i), "T", "OF", 2000 + 100 * (i % 30), p,
                                    std::round((p + noise(rng)) * 10) / 10));
  }
  return s;
}

}  // namespace

TEST_CASE("squared_difference") {
  CHECK(squared_difference(8.0, 8.0) == 0.0);
  CHECK(squared_difference(12.0, 3.0) == 81.0);
  CHECK(squared_difference(Points::from_whole(12), Points::from_whole(3)).to_string() == "81.0");
  CHECK(squared_difference(*Points::parse("0.001"), Points()).micro() == 1);
  CHECK(squared_difference(*Points::parse("0.0005"), Points()).micro() == 0);
  CHECK(squared_difference(*Points::parse("-15"), *Points::parse("8.418504")).to_string() ==
        "548.42633");
}

TEST_CASE("hand-computed four rows") {
  const auto rep = describe(four_rows());
  CHECK(rep.n == 4);
  CHECK(rep.n_dropped == 1);
  check_stats(rep.projection, 6.25, 3.5, 2, 4.25, 6.5, 8.5, 10);
  check_stats(rep.actual, 7.5, std::sqrt(5.0 / 3.0), 6, 6.75, 7.5, 8.25, 9);
  check_stats(rep.price, 3125, std::sqrt(2187500.0 / 3.0), 2000, 2750, 3250, 3625, 4000);
  check_stats(rep.difference, 10.25, std::sqrt(172.75 / 3.0), 0, 6.75, 12.5, 16, 16);
  CHECK(rep.mse == Approx(10.25));
  CHECK(rep.rmse == Approx(std::sqrt(10.25)));
  REQUIRE(rep.r_squared);
  CHECK(*rep.r_squared == Approx(1.0 - 41.0 / 5.0));
  CHECK(squared_correlation(four_rows()) == Approx(1.0 / 15.0));
  CHECK(describe(four_rows(), RSquaredKind::SquaredCorrelation).r_squared ==
        Approx(1.0 / 15.0));
}

TEST_CASE("two rows") {
  Slate s;
  s.players = {make_player("a", "X", "C", 1, 10, 7), make_player("b", "X", "C", 1, 5, 9)};
  CHECK(rmse(s) == Approx(std::sqrt(12.5)));
  CHECK(rmse(s) == Approx(3.5355).epsilon(1e-4));
}

TEST_CASE("single row") {
  Slate s;
  s.players = {make_player("a", "X", "C", 3100, 4.5, 2)};
  const auto rep = describe(s);
  check_stats(rep.projection, 4.5, 0, 4.5, 4.5, 4.5, 4.5, 4.5);
  CHECK_FALSE(rep.r_squared.has_value());
  CHECK_THROWS_AS(r_squared(s), DataError);
}

TEST_CASE("errors") {
  Slate none;
  none.players = {make_player("a", "X", "C", 1, 3)};
  CHECK_THROWS_WITH_AS(describe(none), "no actuals", DataError);
  CHECK_THROWS_AS(rmse(Slate{}), DataError);

  Slate flat;
  flat.players = {make_player("a", "X", "C", 1, 3, 5), make_player("b", "X", "C", 1, 4, 5)};
  CHECK_THROWS_WITH_AS(r_squared(flat), doctest::Contains("undefined R²"), DataError);
}

TEST_CASE("rmse squared is the mean difference") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_slate(rng, 5 + t * 8);
    const auto rep = describe(s);
    CHECK(std::abs(rep.rmse * rep.rmse - rep.difference.mean) < 1e-9);
    CHECK(rep.difference.min >= 0);
    if (rep.r_squared) CHECK(*rep.r_squared <= 1.0);
  }
  // the reported pair 110.476588 / 10.510
  CHECK(std::sqrt(110.476588) == Approx(10.5108).epsilon(1e-5));
  CHECK(std::abs(std::sqrt(110.476588) - 10.510) < 0.001);
}

TEST_CASE("identity predictors") {
  std::mt19937_64 rng(2);
  auto s = random_slate(rng, 40);
  for (auto& p : s.players) p.projection = *p.actual;
  CHECK(rmse(s) == 0.0);
  CHECK(r_squared(s) == 1.0);

  double total = 0;
  for (const auto& p : s.players) total += p.actual->to_double();
  const double mean = total / static_cast<double>(s.players.size());
  for (auto& p : s.players) p.projection = Points::from_double(mean);
  // projection rounded to micro-points, so allow for that
  CHECK(r_squared(s) == Approx(0.0).epsilon(1e-9).scale(1.0));
}

TEST_CASE("permutation invariance") {
  std::mt19937_64 rng(3);
  auto s = random_slate(rng, 60);
  const auto base = describe(s);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(s.players.begin(), s.players.end(), rng);
    const auto rep = describe(s);
    CHECK(rep.projection.median == base.projection.median);
    CHECK(rep.difference.q75 == base.difference.q75);
    CHECK(rep.mse == Approx(base.mse).epsilon(1e-12));
    CHECK(*rep.r_squared == Approx(*base.r_squared).epsilon(1e-12));
  }
}

TEST_CASE("dropping a large-error row lowers mse") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    auto s = random_slate(rng, 25);
    const double before = mse(s);
    const auto it = std::max_element(s.players.begin(), s.players.end(), [](auto& a, auto& b) {
      return squared_difference(a.projection.to_double(), a.actual->to_double()) <
             squared_difference(b.projection.to_double(), b.actual->to_double());
    });
    if (squared_difference(it->projection.to_double(), it->actual->to_double()) <= before)
      continue;
    s.players.erase(it);
    CHECK(mse(s) < before);
  }
}
