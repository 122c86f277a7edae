#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dfsopt/core.hpp"

namespace dfsopt::testing {

// Nine players, one per seat: P, C, 1B, 2B, 3B, SS and three OF. Total
// salary 27000, so the only lineup is the whole pool.
Slate m9_slate();

Player make_player(std::string id, std::string team, std::string_view positions,
                   std::int64_t salary, double projection,
                   std::optional<double> actual = std::nullopt,
                   std::optional<double> ceiling = std::nullopt);

// 12 to 14 players covering every default seat, random eligibility,
// salaries that often make the 35000 cap bind.
Slate random_small_pool(std::mt19937_64& rng, int n_players);

// Realistic-looking slate: pitchers priced 5500-11500, hitters 2000-5500,
// a fixed position cycle with some multi-eligible hitters, round-robin
// teams. Actual and ceiling are populated for every player.
Slate synthetic_slate(std::uint64_t seed, int n_players, int n_teams);

}  // namespace dfsopt::testing
