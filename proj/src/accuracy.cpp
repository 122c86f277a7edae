#include "dfsopt/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dfsopt/error.hpp"

namespace dfsopt {

double squared_difference(double projection, double actual) {
  const double d = projection - actual;
  return d * d;
}

__extension__ using Wide = __int128;

Points squared_difference(Points projection, Points actual) {
  const Wide d = static_cast<Wide>(projection.micro()) - actual.micro();
  const Wide sq = d * d;
  const Wide scale = Points::kScale;
  const Wide rounded = (sq + scale / 2) / scale;
  if (rounded > INT64_MAX) throw std::overflow_error("squared difference out of range");
  return Points::from_micro(static_cast<std::int64_t>(rounded));
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

struct Rows {
  std::vector<double> projection;
  std::vector<double> actual;
  std::vector<double> price;
  std::vector<double> difference;
  std::size_t dropped = 0;
};

Rows usable_rows(const Slate& slate) {
  Rows r;
  for (const Player& p : slate.players) {
    if (!p.actual) {
      ++r.dropped;
      continue;
    }
    r.projection.push_back(p.projection.to_double());
    r.actual.push_back(p.actual->to_double());
    r.price.push_back(static_cast<double>(p.salary));
    // exact difference first, then square
    const double d = (p.projection - *p.actual).to_double();
    r.difference.push_back(d * d);
  }
  if (r.actual.empty()) throw DataError("no actuals");
  return r;
}

double mean_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double determination(const Rows& r) {
  if (r.actual.size() < 2) throw DataError("undefined R²: fewer than two rows");
  const double m = mean_of(r.actual);
  double ss_res = 0;
  double ss_tot = 0;
  for (std::size_t i = 0; i < r.actual.size(); ++i) {
    ss_res += r.difference[i];
    ss_tot += (r.actual[i] - m) * (r.actual[i] - m);
  }
  if (ss_tot == 0) throw DataError("undefined R²: actual has zero variance");
  return 1.0 - ss_res / ss_tot;
}

double correlation_squared(const Rows& r) {
  if (r.actual.size() < 2) throw DataError("undefined R²: fewer than two rows");
  const double mx = mean_of(r.projection);
  const double my = mean_of(r.actual);
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < r.actual.size(); ++i) {
    const double dx = r.projection[i] - mx;
    const double dy = r.actual[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw DataError("undefined R²: a column has zero variance");
  return (sxy * sxy) / (sxx * syy);
}

}  // namespace

ColumnStats column_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("column_stats: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  ColumnStats s;
  s.mean = mean_of(values);
  if (values.size() > 1) {
    double ss = 0;
    for (double x : values) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  s.min = sorted.front();
  s.q25 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q75 = quantile(sorted, 0.75);
  s.max = sorted.back();
  return s;
}

std::string_view to_string(RSquaredKind kind) {
  return kind == RSquaredKind::Determination ? "determination" : "correlation";
}

std::optional<RSquaredKind> parse_r_squared_kind(std::string_view text) {
  if (text == "determination") return RSquaredKind::Determination;
  if (text == "correlation") return RSquaredKind::SquaredCorrelation;
  return std::nullopt;
}

AccuracyReport describe(const Slate& slate, RSquaredKind kind) {
  const Rows r = usable_rows(slate);
  AccuracyReport rep;
  rep.n = r.actual.size();
  rep.n_dropped = r.dropped;
  rep.projection = column_stats(r.projection);
  rep.actual = column_stats(r.actual);
  rep.price = column_stats(r.price);
  rep.difference = column_stats(r.difference);
  rep.mse = rep.difference.mean;
  rep.rmse = std::sqrt(rep.mse);
  rep.r_squared_kind = kind;
  try {
    rep.r_squared = kind == RSquaredKind::Determination ? determination(r) : correlation_squared(r);
  } catch (const DataError&) {
    rep.r_squared.reset();
  }
  return rep;
}

double mse(const Slate& slate) { return mean_of(usable_rows(slate).difference); }

double rmse(const Slate& slate) { return std::sqrt(mse(slate)); }

double r_squared(const Slate& slate) { return determination(usable_rows(slate)); }

double squared_correlation(const Slate& slate) { return correlation_squared(usable_rows(slate)); }

}  // namespace dfsopt
