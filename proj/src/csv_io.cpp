#include "dfsopt/csv_io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>

#include "json.hpp"

#include "dfsopt/error.hpp"

namespace dfsopt {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kMaxDiagnostics = 100;

constexpr std::array<std::string_view, 8> kColumns = {
    "player_id", "name", "team", "positions", "salary", "projection", "ceiling", "actual"};
enum Column { kId, kName, kTeam, kPositions, kSalary, kProjection, kCeiling, kActual };

Diagnostic error_at(std::size_t line, std::string subject, std::string rule,
                    std::string message) {
  return {Severity::Error, line, std::move(subject), std::move(rule), std::move(message)};
}

// Returns the offset of the first byte that breaks UTF-8, or npos.
std::size_t invalid_utf8_at(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = cp << 6 | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

std::string shown(std::string_view s) {
  std::string out = "'";
  for (char c : s.substr(0, 40)) {
    out += (static_cast<unsigned char>(c) < 0x20) ? '?' : c;
  }
  if (s.size() > 40) out += "...";
  return out + "'";
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::optional<std::int64_t> parse_salary(std::string_view s) {
  if (s.empty() || s.size() > 12) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

Json slots_json(const Lineup& l) {
  Json slots = Json::object();
  for (const auto& a : l.assignments) slots[a.slot] = a.player_id;
  return slots;
}

Json optional_points(const std::optional<Points>& p) {
  return p ? Json(p->to_double()) : Json(nullptr);
}

Json stats_json(const ColumnStats& s) {
  return Json{{"mean", s.mean}, {"std", s.std},       {"min", s.min}, {"25%", s.q25},
              {"50%", s.median}, {"75%", s.q75}, {"max", s.max}};
}

}  // namespace

std::vector<CsvRecord> read_csv(std::string_view bytes, std::vector<Diagnostic>& diagnostics) {
  std::vector<CsvRecord> records;
  if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);
  if (const std::size_t bad = invalid_utf8_at(bytes); bad != std::string_view::npos) {
    const auto line = 1 + static_cast<std::size_t>(
                              std::count(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bad), '\n'));
    diagnostics.push_back(error_at(line, "", "encoding", "invalid UTF-8"));
    return records;
  }

  const std::size_t n = bytes.size();
  std::size_t i = 0;
  std::size_t line = 1;
  auto at_line_end = [&](std::size_t k) {
    return k >= n || bytes[k] == '\n' || bytes[k] == '\r';
  };
  auto skip_line_end = [&] {
    if (i < n && bytes[i] == '\r') ++i;
    if (i < n && bytes[i] == '\n') ++i;
    ++line;
  };
  auto skip_rest_of_line = [&] {
    while (!at_line_end(i)) ++i;
    skip_line_end();
  };

  std::size_t errors = 0;
  while (i < n) {
    if (errors >= kMaxDiagnostics) {
      diagnostics.push_back(error_at(line, "", "limit", "too many errors, giving up"));
      break;
    }
    CsvRecord rec;
    rec.line = line;
    if (at_line_end(i)) {  // blank line
      skip_line_end();
      continue;
    }
    bool bad = false;
    while (true) {
      std::string field;
      if (i < n && bytes[i] == '"') {
        ++i;
        bool closed = false;
        while (i < n) {
          const char c = bytes[i];
          if (c == '"') {
            if (i + 1 < n && bytes[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        if (!closed) {
          diagnostics.push_back(error_at(rec.line, "", "csv", "unterminated quoted field"));
          return records;
        }
        if (i < n && bytes[i] != ',' && !at_line_end(i)) {
          diagnostics.push_back(
              error_at(line, "", "csv", "unexpected character after closing quote"));
          ++errors;
          bad = true;
          skip_rest_of_line();
          break;
        }
      } else {
        while (i < n && bytes[i] != ',' && !at_line_end(i)) {
          if (bytes[i] == '"') {
            bad = true;
          }
          field += bytes[i++];
        }
        if (bad) {
          diagnostics.push_back(error_at(line, "", "csv", "quote inside unquoted field"));
          ++errors;
          skip_rest_of_line();
          break;
        }
      }
      rec.fields.push_back(std::move(field));
      if (i < n && bytes[i] == ',') {
        ++i;
        continue;
      }
      skip_line_end();
      break;
    }
    if (!bad) records.push_back(std::move(rec));
  }
  return records;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ColumnMap parse_column_map(std::string_view text) {
  ColumnMap map;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("column map entry " + shown(item) + " is not FROM=TO");
    }
    const std::string from(trim(item.substr(0, eq)));
    const std::string to(trim(item.substr(eq + 1)));
    if (from.empty()) throw ConfigError("column map entry " + shown(item) + " has no source");
    if (std::find(kColumns.begin(), kColumns.end(), to) == kColumns.end()) {
      throw ConfigError("column map target " + shown(to) + " is not a slate column");
    }
    if (!map.emplace(from, to).second) {
      throw ConfigError("column map repeats source " + shown(from));
    }
  }
  return map;
}

SlateParse parse_slate_csv(std::string_view bytes, std::chrono::year_month_day date,
                           const ColumnMap& columns) {
  SlateParse out;
  auto& diags = out.diagnostics;
  const std::vector<CsvRecord> records = read_csv(bytes, diags);
  if (!diags.empty()) return out;
  if (records.empty()) {
    diags.push_back(error_at(1, "", "header", "missing header"));
    return out;
  }

  const CsvRecord& header = records.front();
  std::array<std::size_t, kColumns.size()> index{};
  if (columns.empty()) {
    bool exact = header.fields.size() == kColumns.size();
    for (std::size_t c = 0; exact && c < kColumns.size(); ++c) {
      exact = header.fields[c] == kColumns[c];
      index[c] = c;
    }
    if (!exact) {
      diags.push_back(error_at(header.line, "", "header",
                               "header must be '" + std::string(kSlateHeader) + "'"));
      return out;
    }
  } else {
    index.fill(SIZE_MAX);
    for (std::size_t f = 0; f < header.fields.size(); ++f) {
      std::string name = header.fields[f];
      if (auto it = columns.find(name); it != columns.end()) name = it->second;
      const auto col = std::find(kColumns.begin(), kColumns.end(), name);
      if (col == kColumns.end()) continue;
      auto& slot = index[static_cast<std::size_t>(col - kColumns.begin())];
      if (slot != SIZE_MAX) {
        diags.push_back(error_at(header.line, "", "header",
                                 "column " + shown(name) + " appears more than once"));
      }
      slot = f;
    }
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (index[c] == SIZE_MAX) {
        diags.push_back(error_at(header.line, "", "header",
                                 "missing column '" + std::string(kColumns[c]) + "'"));
      }
    }
    if (!diags.empty()) return out;
  }

  Slate slate;
  slate.date = date;
  std::map<std::string, std::size_t> first_line;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (diags.size() >= kMaxDiagnostics) {
      diags.push_back(error_at(records[r].line, "", "limit", "too many errors, giving up"));
      break;
    }
    const CsvRecord& rec = records[r];
    const std::size_t line = rec.line;
    if (rec.fields.size() != header.fields.size()) {
      diags.push_back(error_at(line, "", "field count",
                               "expected " + std::to_string(header.fields.size()) +
                                   " fields, found " + std::to_string(rec.fields.size())));
      continue;
    }
    auto field = [&](Column c) -> const std::string& { return rec.fields[index[c]]; };
    const std::size_t before = diags.size();
    Player p;
    p.id = field(kId);
    p.name = field(kName);
    p.team = field(kTeam);
    if (p.id.empty()) diags.push_back(error_at(line, "", "empty id", "empty player_id"));
    if (p.team.empty()) diags.push_back(error_at(line, p.id, "missing team", "empty team"));
    if (auto pos = PositionSet::parse(field(kPositions))) {
      p.positions = *pos;
    } else {
      diags.push_back(error_at(line, p.id, "invalid positions",
                               "invalid positions " + shown(field(kPositions))));
    }
    if (auto salary = parse_salary(field(kSalary))) {
      p.salary = *salary;
    } else {
      diags.push_back(
          error_at(line, p.id, "invalid salary", "invalid salary " + shown(field(kSalary))));
    }
    if (auto proj = Points::parse(field(kProjection))) {
      p.projection = *proj;
    } else {
      diags.push_back(error_at(line, p.id, "invalid projection",
                               "invalid projection " + shown(field(kProjection))));
    }
    for (auto [col, target, label] :
         {std::tuple{kCeiling, &p.ceiling, "ceiling"}, std::tuple{kActual, &p.actual, "actual"}}) {
      const std::string& text = field(col);
      if (text.empty()) continue;
      if (auto v = Points::parse(text)) {
        *target = *v;
      } else {
        diags.push_back(error_at(line, p.id, std::string("invalid ") + label,
                                 std::string("invalid ") + label + " " + shown(text)));
      }
    }
    if (!p.id.empty()) {
      auto [it, inserted] = first_line.emplace(p.id, line);
      if (!inserted) {
        diags.push_back(error_at(line, p.id, "duplicate id",
                                 "duplicate id " + shown(p.id) + " (first on line " +
                                     std::to_string(it->second) + ")"));
      }
    }
    if (diags.size() == before) slate.players.push_back(std::move(p));
  }
  if (!diags.empty()) return out;
  if (slate.players.empty()) {
    diags.push_back(error_at(header.line, "", "empty slate", "no player rows"));
    return out;
  }
  diags = validate_slate(slate);
  if (diags.empty()) out.slate = std::move(slate);
  return out;
}

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  return std::nullopt;
}

std::string emit_lineups(const Portfolio& portfolio, const RosterRules& rules,
                         OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out;
    for (const auto& unit : rules.slot_units()) out += csv_field(unit.name) + ",";
    out += "salary,projection\n";
    for (const Lineup& l : portfolio.lineups) {
      for (const auto& a : l.assignments) out += csv_field(a.player_id) + ",";
      out += std::to_string(l.total_salary) + "," + l.total_projection.to_string() + "\n";
    }
    return out;
  }

  Json root;
  root["lineups"] = Json::array();
  for (std::size_t i = 0; i < portfolio.lineups.size(); ++i) {
    const Lineup& l = portfolio.lineups[i];
    root["lineups"].push_back({{"iteration", i + 1},
                               {"slots", slots_json(l)},
                               {"salary", l.total_salary},
                               {"projection", l.total_projection.to_double()},
                               {"actual", optional_points(l.total_actual)}});
  }
  std::vector<std::pair<std::string, int>> exposure(portfolio.exposure.begin(),
                                                    portfolio.exposure.end());
  std::stable_sort(exposure.begin(), exposure.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  root["exposure"] = Json::array();
  const double n = static_cast<double>(std::max<std::size_t>(1, portfolio.lineups.size()));
  for (const auto& [id, count] : exposure) {
    root["exposure"].push_back(
        {{"player_id", id}, {"count", count}, {"fraction", static_cast<double>(count) / n}});
  }
  return root.dump(2) + "\n";
}

std::vector<std::vector<std::string>> parse_lineups_csv(std::string_view bytes,
                                                        const RosterRules& rules) {
  std::vector<Diagnostic> diags;
  const auto records = read_csv(bytes, diags);
  if (!diags.empty()) throw DataError("lineups csv: " + diags.front().to_string());
  const auto& units = rules.slot_units();
  std::vector<std::string> expected;
  for (const auto& u : units) expected.push_back(u.name);
  expected.push_back("salary");
  expected.push_back("projection");
  if (records.empty() || records.front().fields != expected) {
    throw DataError("lineups csv: unexpected header");
  }
  std::vector<std::vector<std::string>> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    if (f.size() != expected.size()) {
      throw DataError("lineups csv: line " + std::to_string(records[r].line) +
                      ": wrong field count");
    }
    std::vector<std::string> ids(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(units.size()));
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  return out;
}

std::string emit_scatter_data(const Slate& slate) {
  struct Row {
    const Player* player;
    Points sq;
  };
  std::vector<Row> rows;
  for (const Player& p : slate.players) {
    if (p.actual) rows.push_back({&p, squared_difference(p.projection, *p.actual)});
  }
  if (rows.empty()) throw DataError("no actuals");
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.sq > b.sq; });
  std::string out = "player_id,projection,actual,squared_difference\n";
  for (const Row& r : rows) {
    out += csv_field(r.player->id) + "," + r.player->projection.to_string() + "," +
           r.player->actual->to_string() + "," + r.sq.to_string() + "\n";
  }
  return out;
}

std::string emit_accuracy_report(const AccuracyReport& report, OutputFormat format) {
  const std::array<std::pair<const char*, const ColumnStats*>, 4> cols = {{
      {"projection", &report.projection},
      {"actual", &report.actual},
      {"price", &report.price},
      {"difference", &report.difference},
  }};
  if (format == OutputFormat::Csv) {
    std::string out = "statistic";
    for (const auto& [name, s] : cols) out += std::string(",") + name;
    out += "\ncount";
    for (std::size_t k = 0; k < cols.size(); ++k) out += "," + std::to_string(report.n);
    out += "\n";
    const std::array<std::pair<const char*, double ColumnStats::*>, 7> stats = {{
        {"mean", &ColumnStats::mean},
        {"std", &ColumnStats::std},
        {"min", &ColumnStats::min},
        {"25%", &ColumnStats::q25},
        {"50%", &ColumnStats::median},
        {"75%", &ColumnStats::q75},
        {"max", &ColumnStats::max},
    }};
    for (const auto& [label, member] : stats) {
      out += label;
      for (const auto& [name, s] : cols) out += "," + fixed6(s->*member);
      out += "\n";
    }
    out += "\nmetric,value\n";
    out += "n_dropped," + std::to_string(report.n_dropped) + "\n";
    out += "mse," + fixed6(report.mse) + "\n";
    out += "rmse," + fixed6(report.rmse) + "\n";
    out += "r_squared," + (report.r_squared ? fixed6(*report.r_squared) : std::string()) + "\n";
    out += "r_squared_kind," + std::string(to_string(report.r_squared_kind)) + "\n";
    return out;
  }
  Json root;
  root["n"] = report.n;
  root["n_dropped"] = report.n_dropped;
  root["columns"] = Json::object();
  for (const auto& [name, s] : cols) root["columns"][name] = stats_json(*s);
  root["mse"] = report.mse;
  root["rmse"] = report.rmse;
  root["r_squared"] = report.r_squared ? Json(*report.r_squared) : Json(nullptr);
  root["r_squared_kind"] = to_string(report.r_squared_kind);
  return root.dump(2) + "\n";
}

std::string emit_backtest_report(const BacktestReport& report, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out = "date,projected_total,projected_actual,hindsight_actual,gap\n";
    for (const auto& d : report.days) {
      out += format_date(d.date) + "," + d.best_projected.projected_total.to_string() + "," +
             (d.best_projected.actual_total ? d.best_projected.actual_total->to_string() : "") +
             "," + d.hindsight_optimal.actual_total.to_string() + "," + d.gap.to_string() + "\n";
    }
    out += "mean," + fixed6(report.mean_projected) + "," +
           (report.mean_projected_actual ? fixed6(*report.mean_projected_actual) : "") + "," +
           fixed6(report.mean_hindsight_actual) + "," + fixed6(report.mean_gap) + "\n";
    return out;
  }
  Json root;
  root["days"] = Json::array();
  for (const auto& d : report.days) {
    root["days"].push_back(
        {{"date", format_date(d.date)},
         {"best_projected",
          {{"slots", slots_json(d.best_projected.lineup)},
           {"projected_total", d.best_projected.projected_total.to_double()},
           {"actual_total", optional_points(d.best_projected.actual_total)}}},
         {"hindsight_optimal",
          {{"slots", slots_json(d.hindsight_optimal.lineup)},
           {"actual_total", d.hindsight_optimal.actual_total.to_double()}}},
         {"gap", d.gap.to_double()}});
  }
  root["mean_projected"] = report.mean_projected;
  root["mean_hindsight_actual"] = report.mean_hindsight_actual;
  root["mean_gap"] = report.mean_gap;
  root["mean_projected_actual"] =
      report.mean_projected_actual ? Json(*report.mean_projected_actual) : Json(nullptr);
  return root.dump(2) + "\n";
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!out.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ConfigError(where + "repeated key '" + key + "'");
    }
  }
  return out;
}

}  // namespace dfsopt
