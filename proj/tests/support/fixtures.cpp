#include "support/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dfsopt::testing {

Player make_player(std::string id, std::string team, std::string_view positions,
                   std::int64_t salary, double projection, std::optional<double> actual,
                   std::optional<double> ceiling) {
  Player p;
  p.name = "Player " + id;
  p.id = std::move(id);
  p.team = std::move(team);
  p.positions = PositionSet::parse(positions).value();
  p.salary = salary;
  p.projection = Points::from_double(projection);
  if (actual) p.actual = Points::from_double(*actual);
  if (ceiling) p.ceiling = Points::from_double(*ceiling);
  return p;
}

Slate m9_slate() {
  Slate s;
  s.date = std::chrono::year_month_day{std::chrono::year(2019), std::chrono::June,
                                       std::chrono::day(1)};
  s.players = {
      make_player("p1", "WSH", "P", 4000, 18.2, 21.0, 30.0),
      make_player("c1", "WSH", "C", 3000, 8.1, 3.0, 15.0),
      make_player("b1", "NYM", "1B", 3000, 9.4, 12.5, 17.5),
      make_player("b2", "NYM", "2B", 3000, 7.7, 6.0, 14.0),
      make_player("b3", "ATL", "3B", 3000, 8.8, 0.0, 16.0),
      make_player("ss", "ATL", "SS", 3000, 7.9, 9.0, 15.5),
      make_player("o1", "PHI", "OF", 2600, 10.3, 15.2, 19.0),
      make_player("o2", "PHI", "OF", 2700, 9.6, -1.0, 18.0),
      make_player("o3", "MIA", "OF", 2700, 8.5, 6.3, 16.5),
  };
  return s;
}

namespace {

double round_to(double v, double step) { return std::round(v / step) * step; }

const std::array<std::string_view, 12> kExtraPositions = {
    "P", "C", "1B", "2B", "3B", "SS", "OF", "OF", "C/1B", "2B/SS", "1B/OF", "3B/SS"};

}  // namespace

Slate random_small_pool(std::mt19937_64& rng, int n_players) {
  std::uniform_int_distribution<int> salary_steps(20, 55);
  std::uniform_int_distribution<std::int64_t> micro(0, 25'000'000);
  std::uniform_real_distribution<double> actual(-5.0, 40.0);
  std::uniform_int_distribution<std::size_t> extra(0, kExtraPositions.size() - 1);
  const std::array<std::string_view, 9> base = {"P", "C", "1B", "2B", "3B", "SS", "OF", "OF", "OF"};

  Slate s;
  s.date = std::chrono::year_month_day{std::chrono::year(2019), std::chrono::June,
                                       std::chrono::day(2)};
  for (int i = 0; i < n_players; ++i) {
    const std::string_view pos = i < 9 ? base[static_cast<std::size_t>(i)] : kExtraPositions[extra(rng)];
    Player p = make_player("r" + std::to_string(i), i % 2 ? "AAA" : "BBB", pos,
                           salary_steps(rng) * 100, 0.0, round_to(actual(rng), 0.1));
    p.projection = Points::from_micro(micro(rng));
    p.ceiling = p.projection + Points::from_whole(5);
    s.players.push_back(std::move(p));
  }
  std::shuffle(s.players.begin(), s.players.end(), rng);
  return s;
}

Slate synthetic_slate(std::uint64_t seed, int n_players, int n_teams) {
  static const std::array<std::string_view, 15> kCycle = {
      "P", "P", "C", "1B", "2B", "3B", "SS", "OF", "OF", "OF", "OF", "C/1B", "2B/SS", "3B/OF", "OF"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pitcher_proj(15.0, 45.0);
  std::uniform_real_distribution<double> hitter_proj(2.0, 16.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  Slate s;
  s.date = std::chrono::year_month_day{std::chrono::year(2019), std::chrono::June,
                                       std::chrono::day(3)};
  for (int i = 0; i < n_players; ++i) {
    const std::string_view pos = kCycle[static_cast<std::size_t>(i) % kCycle.size()];
    const bool pitcher = pos == "P";
    const double proj = round_to(pitcher ? pitcher_proj(rng) : hitter_proj(rng), 1e-4);
    const double raw_salary = pitcher ? 5000 + proj * 150 + 800 * noise(rng)
                                      : 2000 + proj * 150 + 300 * noise(rng);
    const auto salary = static_cast<std::int64_t>(
        std::clamp(round_to(raw_salary, 100), pitcher ? 5500.0 : 2000.0,
                   pitcher ? 11500.0 : 5500.0));
    const double act = round_to(std::max(-15.0, proj + (pitcher ? 12.0 : 9.0) * noise(rng)), 0.1);
    const double ceil = round_to(proj * 1.8 + 2.0 * std::abs(noise(rng)), 1e-4);
    s.players.push_back(make_player("s" + std::to_string(i),
                                    "T" + std::to_string(i % n_teams), pos, salary, proj, act,
                                    ceil));
  }
  return s;
}

}  // namespace dfsopt::testing
