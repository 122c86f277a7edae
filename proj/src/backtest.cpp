#include "dfsopt/backtest.hpp"

#include <algorithm>
#include <future>

#include "dfsopt/error.hpp"
#include "dfsopt/lineup_opt.hpp"

namespace dfsopt {

BacktestDay backtest_day(const Slate& slate, const RosterRules& rules) {
  BacktestDay day;
  day.date = slate.date;

  PortfolioConfig by_projection;
  const Lineup best = optimize_lineup(slate, rules, by_projection);
  day.best_projected = {best, best.total_projection, best.total_actual};

  Slate scored;
  scored.date = slate.date;
  std::copy_if(slate.players.begin(), slate.players.end(), std::back_inserter(scored.players),
               [](const Player& p) { return p.actual.has_value(); });
  PortfolioConfig by_actual;
  by_actual.objective_source = ObjectiveSource::Actual;
  Lineup hindsight;
  try {
    hindsight = optimize_lineup(scored, rules, by_actual);
  } catch (const InfeasibleError& e) {
    throw DataError(std::string("insufficient actuals: ") + e.what());
  }
  day.hindsight_optimal = {hindsight, *hindsight.total_actual};
  day.gap = day.hindsight_optimal.actual_total - day.best_projected.projected_total;
  return day;
}

BacktestReport backtest_range(const std::vector<Slate>& slates, const RosterRules& rules) {
  if (slates.empty()) throw DataError("backtest: no slates");

  std::vector<std::future<BacktestDay>> pending;
  pending.reserve(slates.size());
  for (const Slate& slate : slates) {
    pending.push_back(std::async(std::launch::async,
                                 [&slate, &rules] { return backtest_day(slate, rules); }));
  }

  BacktestReport report;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    try {
      report.days.push_back(pending[i].get());
    } catch (const Error& e) {
      const std::string date = format_date(slates[i].date);
      report.diagnostics.push_back(
          {Severity::Warning, std::nullopt, date, "day skipped", date + ": " + e.what()});
    }
  }
  if (report.days.empty()) throw DataError("backtest: every day failed");

  std::stable_sort(report.days.begin(), report.days.end(),
                   [](const BacktestDay& a, const BacktestDay& b) { return a.date < b.date; });

  std::int64_t projected = 0;
  std::int64_t hindsight = 0;
  std::int64_t projected_actual = 0;
  std::size_t with_actual = 0;
  for (const BacktestDay& d : report.days) {
    projected += d.best_projected.projected_total.micro();
    hindsight += d.hindsight_optimal.actual_total.micro();
    if (d.best_projected.actual_total) {
      projected_actual += d.best_projected.actual_total->micro();
      ++with_actual;
    }
  }
  const auto n = static_cast<double>(report.days.size());
  report.mean_projected = static_cast<double>(projected) / n / Points::kScale;
  report.mean_hindsight_actual = static_cast<double>(hindsight) / n / Points::kScale;
  report.mean_gap = report.mean_hindsight_actual - report.mean_projected;
  if (with_actual > 0) {
    report.mean_projected_actual = static_cast<double>(projected_actual) /
                                   static_cast<double>(with_actual) / Points::kScale;
  }
  return report;
}

}  // namespace dfsopt
