#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "dfsopt/core.hpp"
#include "dfsopt/points.hpp"

namespace dfsopt {

// (projection - actual)^2
double squared_difference(double projection, double actual);
// Same, rounded half away from zero to the nearest micro-point.
Points squared_difference(Points projection, Points actual);

struct ColumnStats {
  double mean = 0;
  double std = 0;  // sample, n - 1 denominator; 0 for a single row
  double min = 0;
  double q25 = 0;
  double median = 0;
  double q75 = 0;
  double max = 0;
};

// Linear interpolation between order statistics. Throws
// std::invalid_argument on empty input.
ColumnStats column_stats(std::span<const double> values);

enum class RSquaredKind { Determination, SquaredCorrelation };

std::string_view to_string(RSquaredKind kind);
std::optional<RSquaredKind> parse_r_squared_kind(std::string_view text);

struct AccuracyReport {
  std::size_t n = 0;
  std::size_t n_dropped = 0;  // rows without an actual
  ColumnStats projection;
  ColumnStats actual;
  ColumnStats price;
  ColumnStats difference;
  double mse = 0;
  double rmse = 0;
  RSquaredKind r_squared_kind = RSquaredKind::Determination;
  std::optional<double> r_squared;  // absent when undefined for the data
};

// Statistics over the players that have an actual. Throws DataError("no
// actuals") when there are none.
AccuracyReport describe(const Slate& slate, RSquaredKind kind = RSquaredKind::Determination);

double mse(const Slate& slate);
double rmse(const Slate& slate);
// 1 - SS_res / SS_tot with the projection as predictor. Throws
// DataError("undefined R²") with fewer than two rows or constant actuals.
double r_squared(const Slate& slate);
// Squared Pearson correlation between projection and actual.
double squared_correlation(const Slate& slate);

}  // namespace dfsopt
