#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "dfsopt/core.hpp"
#include "dfsopt/points.hpp"

namespace dfsopt {

struct ProjectedLineup {
  Lineup lineup;
  Points projected_total;
  std::optional<Points> actual_total;  // absent if a member has no actual
};

struct HindsightLineup {
  Lineup lineup;
  Points actual_total;
};

struct BacktestDay {
  std::chrono::year_month_day date{};
  ProjectedLineup best_projected;
  HindsightLineup hindsight_optimal;
  // hindsight actual total minus best_projected's projected total
  Points gap;
};

struct BacktestReport {
  std::vector<BacktestDay> days;  // ascending date
  double mean_projected = 0;
  double mean_hindsight_actual = 0;
  double mean_gap = 0;
  // Mean actual score of the projection-optimal lineups, over days where
  // every member has an actual.
  std::optional<double> mean_projected_actual;
  std::vector<Diagnostic> diagnostics;  // one per skipped day
};

// Throws InfeasibleError when no lineup fits the slate and
// DataError("insufficient actuals") when the scored players cannot fill
// a roster.
BacktestDay backtest_day(const Slate& slate, const RosterRules& rules);

// Days are evaluated concurrently. Failing days are skipped with a
// diagnostic; throws DataError when the list is empty or every day fails.
BacktestReport backtest_range(const std::vector<Slate>& slates, const RosterRules& rules);

}  // namespace dfsopt
