#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfsopt/accuracy.hpp"
#include "dfsopt/backtest.hpp"
#include "dfsopt/core.hpp"
#include "dfsopt/lineup_opt.hpp"

namespace dfsopt {

inline constexpr std::string_view kSlateHeader =
    "player_id,name,team,positions,salary,projection,ceiling,actual";

struct CsvRecord {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: comma separated, double-quoted fields with "" escapes,
// LF or CRLF line ends, optional UTF-8 byte order mark. Blank lines are
// skipped. Problems are appended to `diagnostics`; records read before
// the first fatal problem are still returned.
std::vector<CsvRecord> read_csv(std::string_view bytes, std::vector<Diagnostic>& diagnostics);

// Quotes a field when it holds a comma, quote, or line break.
std::string csv_field(std::string_view text);

// Foreign header name -> canonical column name.
using ColumnMap = std::map<std::string, std::string>;

// "Proj=projection,Salary=salary". Throws ConfigError.
ColumnMap parse_column_map(std::string_view text);

struct SlateParse {
  std::optional<Slate> slate;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

// Without a column map the header must equal kSlateHeader. With one, the
// renamed header must name every canonical column once; other columns are
// ignored.
SlateParse parse_slate_csv(std::string_view bytes, std::chrono::year_month_day date,
                           const ColumnMap& columns = {});

enum class OutputFormat { Json, Csv };

std::optional<OutputFormat> parse_output_format(std::string_view text);

std::string emit_lineups(const Portfolio& portfolio, const RosterRules& rules,
                         OutputFormat format);

// Reads the CSV written by emit_lineups back into sorted player id lists.
// Throws DataError.
std::vector<std::vector<std::string>> parse_lineups_csv(std::string_view bytes,
                                                        const RosterRules& rules);

// player_id,projection,actual,squared_difference for rows with an actual,
// largest squared difference first. Throws DataError("no actuals").
std::string emit_scatter_data(const Slate& slate);

std::string emit_accuracy_report(const AccuracyReport& report, OutputFormat format);

std::string emit_backtest_report(const BacktestReport& report, OutputFormat format);

// Flat key=value lines; '#' starts a comment line. Throws ConfigError
// naming the line on malformed input or a repeated key.
std::map<std::string, std::string> parse_config_text(std::string_view text);

}  // namespace dfsopt
