#include "doctest.h"

#include <algorithm>
#include <random>

#include "dfsopt/error.hpp"
#include "dfsopt/lineup_opt.hpp"
#include "support/fixtures.hpp"
#include "support/lineup_oracle.hpp"

using namespace dfsopt;
using testing::m9_slate;
using testing::make_player;

namespace {

const RosterRules kRules = RosterRules::fanduel_mlb();

std::size_t count_label_prefix(const binprog::BinaryProgram& p, std::string_view prefix) {
  return static_cast<std::size_t>(std::count_if(
      p.constraints.begin(), p.constraints.end(),
      [&](const auto& c) { return c.label.starts_with(prefix); }));
}

std::int64_t sum_projection(const Lineup& l) { return l.total_projection.micro(); }

}  // namespace

TEST_CASE("M9 program shape") {
  const auto slate = m9_slate();
  PortfolioConfig cfg;
  const auto lp = build_program(slate, kRules, cfg, {}, {});
  CHECK(lp.program.n_vars == 9);
  CHECK(count_label_prefix(lp.program, "overlap") == 0);
  CHECK(count_label_prefix(lp.program, "roster") == 1);
  CHECK(count_label_prefix(lp.program, "salary") == 1);

  const Lineup first = optimize_lineup(slate, kRules, cfg);
  const auto lp2 = build_program(slate, kRules, cfg, {first}, {});
  REQUIRE(count_label_prefix(lp2.program, "overlap") == 1);
  const auto& row = lp2.program.constraints.back();
  CHECK(row.sense == binprog::Sense::LessEqual);
  CHECK(row.rhs == 8);
  CHECK(row.terms.size() == 9);
}

TEST_CASE("M9 unique lineup") {
  const auto slate = m9_slate();
  const Lineup l = optimize_lineup(slate, kRules, {});
  CHECK(check_lineup(l, slate, kRules));
  CHECK(l.total_salary == 27000);
  CHECK(l.total_projection == *Points::parse("88.5"));
  CHECK(l.total_actual == *Points::parse("72.0"));
  CHECK(l.assignments.front() == SlotAssignment{"P", "p1"});
  CHECK(l.assignments.back() == SlotAssignment{"UTIL", "b1"});
}

TEST_CASE("a better pitcher is swapped in") {
  auto slate = m9_slate();
  slate.players.push_back(make_player("p2", "NYM", "P", 4000, 19.2, 5.0));
  const Lineup l = optimize_lineup(slate, kRules, {});
  CHECK(l.assignments.front().player_id == "p2");
  CHECK(l.total_projection == *Points::parse("89.5"));
}

TEST_CASE("M9 portfolio of two stops after one") {
  const auto slate = m9_slate();
  PortfolioConfig cfg;
  cfg.n_lineups = 2;
  const auto p = generate_portfolio(slate, kRules, cfg);
  CHECK(p.lineups.size() == 1);
  REQUIRE(p.diagnostics.size() == 1);
  CHECK(p.diagnostics[0].rule == "infeasible");
  CHECK(p.diagnostics[0].message.find("iteration 2") != std::string::npos);
}

TEST_CASE("infeasible slates") {
  auto slate = m9_slate();
  SUBCASE("cap binds") {
    CHECK_THROWS_WITH_AS(optimize_lineup(slate, kRules.with_salary_cap(26999), {}),
                         doctest::Contains("salary cap"), InfeasibleError);
  }
  SUBCASE("missing shortstop") {
    slate.players.erase(slate.players.begin() + 5);
    CHECK_THROWS_AS(optimize_lineup(slate, kRules, {}), InfeasibleError);
  }
}

TEST_CASE("optimizer matches enumeration on random pools") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(12, 14);
  for (int trial = 0; trial < 40; ++trial) {
    CAPTURE(trial);
    const auto slate = testing::random_small_pool(rng, size(rng));
    const auto oracle = testing::best_lineup_by_enumeration(
        slate, kRules, [](const Player& p) { return std::optional(p.projection.micro()); });
    if (!oracle.best_micro) {
      CHECK_THROWS_AS(optimize_lineup(slate, kRules, {}), InfeasibleError);
      continue;
    }
    const Lineup l = optimize_lineup(slate, kRules, {});
    CHECK(check_lineup(l, slate, kRules));
    CHECK(sum_projection(l) == *oracle.best_micro);
  }
}

TEST_CASE("ceiling objective only changes the objective") {
  std::mt19937_64 rng(5);
  const auto slate = testing::random_small_pool(rng, 14);
  PortfolioConfig proj;
  PortfolioConfig ceil;
  ceil.objective_source = ObjectiveSource::Ceiling;
  const auto a = build_program(slate, kRules, proj, {}, {});
  const auto b = build_program(slate, kRules, ceil, {}, {});
  CHECK(a.program.constraints == b.program.constraints);
  CHECK(a.program.objective != b.program.objective);

  const auto oracle = testing::best_lineup_by_enumeration(
      slate, kRules, [](const Player& p) { return p.ceiling ? std::optional(p.ceiling->micro()) : std::nullopt; });
  if (oracle.best_micro) {
    const Lineup l = optimize_lineup(slate, kRules, ceil);
    std::int64_t total = 0;
    for (const auto& a2 : l.assignments) total += slate.at(a2.player_id).ceiling->micro();
    CHECK(total == *oracle.best_micro);
  }
}

TEST_CASE("missing objective values are reported") {
  auto slate = m9_slate();
  slate.players[4].ceiling.reset();
  PortfolioConfig cfg;
  cfg.objective_source = ObjectiveSource::Ceiling;
  CHECK_THROWS_AS(build_program(slate, kRules, cfg, {}, {}), DataError);
}

TEST_CASE("portfolio invariants") {
  const auto slate = testing::synthetic_slate(11, 45, 6);
  PortfolioConfig cfg;
  cfg.n_lineups = 25;
  cfg.max_overlap = 5;
  cfg.max_exposure = ExposureCap::count(10);
  const auto p = generate_portfolio(slate, kRules, cfg);
  REQUIRE(p.lineups.size() == 25);
  CHECK(p.diagnostics.empty());
  for (std::size_t i = 0; i < p.lineups.size(); ++i) {
    CHECK(check_lineup(p.lineups[i], slate, kRules));
    if (i > 0) CHECK(p.lineups[i].total_projection <= p.lineups[i - 1].total_projection);
    for (std::size_t j = 0; j < i; ++j) CHECK(overlap(p.lineups[i], p.lineups[j]) <= 5);
  }
  std::map<std::string, int> counted;
  for (const auto& l : p.lineups)
    for (const auto& a : l.assignments) ++counted[a.player_id];
  CHECK(counted == p.exposure);
  for (const auto& [id, n] : counted) CHECK(n <= 10);
}

TEST_CASE("exposure as a fraction") {
  CHECK(ExposureCap::fraction(0.3).resolve(10) == 3);
  CHECK(ExposureCap::fraction(0.01).resolve(10) == 1);
  CHECK(ExposureCap::fraction(1.0).resolve(7) == 7);
  CHECK(ExposureCap::count(4).resolve(100) == 4);
}

TEST_CASE("locks and excludes") {
  const auto slate = testing::synthetic_slate(3, 60, 8);
  const Lineup base = optimize_lineup(slate, kRules, {});

  PortfolioConfig cfg;
  const std::string dropped = base.assignments[0].player_id;
  cfg.excludes = {dropped};
  const Lineup l = optimize_lineup(slate, kRules, cfg);
  for (const auto& a : l.assignments) CHECK(a.player_id != dropped);
  CHECK(l.total_projection <= base.total_projection);

  const auto it = std::find_if(slate.players.begin(), slate.players.end(), [&](const Player& p) {
    const auto ids = base.player_ids();
    return p.is_hitter() && !std::binary_search(ids.begin(), ids.end(), p.id);
  });
  REQUIRE(it != slate.players.end());
  PortfolioConfig locked;
  locked.locks = {it->id};
  const Lineup with = optimize_lineup(slate, kRules, locked);
  const auto ids = with.player_ids();
  CHECK(std::binary_search(ids.begin(), ids.end(), it->id));
  CHECK(with.total_projection <= base.total_projection);

  PortfolioConfig both;
  both.locks = {it->id};
  both.excludes = {it->id};
  CHECK_THROWS_AS(optimize_lineup(slate, kRules, both), ConfigError);

  PortfolioConfig ghost;
  ghost.locks = {"nobody"};
  CHECK_THROWS_AS(optimize_lineup(slate, kRules, ghost), DataError);
}

TEST_CASE("locks override exposure with a warning") {
  const auto slate = testing::synthetic_slate(3, 60, 8);
  PortfolioConfig cfg;
  cfg.n_lineups = 6;
  cfg.max_overlap = 7;
  cfg.max_exposure = ExposureCap::count(2);
  cfg.locks = {slate.players[3].id};
  const auto p = generate_portfolio(slate, kRules, cfg);
  REQUIRE(p.lineups.size() == 6);
  CHECK(p.exposure.at(slate.players[3].id) == 6);
  REQUIRE_FALSE(p.diagnostics.empty());
  CHECK(p.diagnostics[0].severity == Severity::Warning);
  CHECK(p.diagnostics[0].rule == "lock overrides exposure");
  for (const auto& [id, n] : p.exposure) {
    if (id != slate.players[3].id) CHECK(n <= 2);
  }
}

TEST_CASE("config validation") {
  PortfolioConfig cfg;
  cfg.n_lineups = 0;
  CHECK_THROWS_AS(cfg.validate(kRules), ConfigError);
  cfg.n_lineups = kMaxLineups + 1;
  CHECK_THROWS_AS(cfg.validate(kRules), ConfigError);
  cfg.n_lineups = 3;
  cfg.max_overlap = 9;
  CHECK_THROWS_AS(cfg.validate(kRules), ConfigError);
  cfg.max_overlap = 0;
  CHECK_NOTHROW(cfg.validate(kRules));
  cfg.max_exposure = ExposureCap::fraction(1.5);
  CHECK_THROWS_AS(cfg.validate(kRules), ConfigError);
  cfg.max_exposure = ExposureCap::count(0);
  CHECK_THROWS_AS(cfg.validate(kRules), ConfigError);
  cfg.max_exposure.reset();
  cfg.stacking = StackSpec{1, 1};
  CHECK_THROWS_AS(cfg.validate(kRules), ConfigError);
}

TEST_CASE("stacking") {
  const auto slate = testing::synthetic_slate(9, 40, 2);
  PortfolioConfig cfg;
  cfg.n_lineups = 10;
  cfg.max_overlap = 6;
  cfg.stacking = StackSpec{4, 1};
  const auto p = generate_portfolio(slate, kRules, cfg);
  REQUIRE(p.lineups.size() == 10);
  for (const auto& l : p.lineups) {
    std::map<std::string, int> hitters;
    for (const auto& a : l.assignments) {
      const auto& pl = slate.at(a.player_id);
      if (pl.is_hitter()) ++hitters[pl.team];
    }
    int most = 0;
    for (const auto& [team, n] : hitters) most = std::max(most, n);
    CHECK(most >= 4);
  }

  cfg.stacking = StackSpec{2, 5};
  CHECK_THROWS_WITH_AS(generate_portfolio(slate, kRules, cfg),
                       doctest::Contains("stack demand exceeds roster"), ConfigError);
}

TEST_CASE("stacking matches enumeration") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto slate = testing::random_small_pool(rng, 13);
    PortfolioConfig cfg;
    cfg.stacking = StackSpec{3, 1};
    const auto oracle = testing::best_lineup_by_enumeration(
        slate, kRules, [](const Player& p) { return std::optional(p.projection.micro()); });
    std::optional<std::int64_t> best;
    testing::for_each_valid_lineup(slate, kRules, [&](std::span<const std::size_t> members) {
      std::map<std::string, int> hitters;
      std::int64_t total = 0;
      for (std::size_t i : members) {
        total += slate.players[i].projection.micro();
        if (slate.players[i].is_hitter()) ++hitters[slate.players[i].team];
      }
      const bool stacked = std::any_of(hitters.begin(), hitters.end(),
                                       [](const auto& kv) { return kv.second >= 3; });
      if (stacked && (!best || total > *best)) best = total;
    });
    if (!best) {
      CHECK_THROWS_AS(optimize_lineup(slate, kRules, cfg), InfeasibleError);
      continue;
    }
    CHECK(optimize_lineup(slate, kRules, cfg).total_projection.micro() == *best);
    CHECK(*best <= *oracle.best_micro);
  }
}
