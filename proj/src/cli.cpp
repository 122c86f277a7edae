#include "dfsopt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dfsopt/accuracy.hpp"
#include "dfsopt/backtest.hpp"
#include "dfsopt/csv_io.hpp"
#include "dfsopt/error.hpp"
#include "dfsopt/lineup_opt.hpp"

namespace dfsopt {

namespace {

namespace fs = std::filesystem;

using Settings = std::map<std::string, std::string>;

const std::set<std::string> kKnownKeys = {
    "slate", "date",     "salary_cap", "slots",  "util_pitcher", "format",
    "out",   "map",      "n",          "max_overlap", "max_exposure", "stack",
    "lock",  "exclude",  "objective",  "r2",     "dir"};

// Binds command line options to settings keys so that only the options
// actually given override the config file.
struct Bindings {
  std::map<std::string, std::string> values;
  std::map<std::string, std::vector<std::string>> lists;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::pair<std::string, CLI::Option*>> list_options;
  std::vector<std::pair<std::string, CLI::Option*>> flags;

  void value(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }
  void list(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    list_options.emplace_back(key, app->add_option(flag, lists[key], help)->allow_extra_args(false));
  }
  void flag(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    flags.emplace_back(key, app->add_flag(flag, help));
  }

  void overlay(Settings& s) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) s[key] = values.at(key);
    }
    for (const auto& [key, opt] : list_options) {
      if (opt->count() == 0) continue;
      std::string joined;
      for (const auto& v : lists.at(key)) joined += (joined.empty() ? "" : ",") + v;
      s[key] = joined;
    }
    for (const auto& [key, opt] : flags) {
      if (opt->count() > 0) s[key] = "true";
    }
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<std::string> get(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  if (it == s.end()) return std::nullopt;
  return it->second;
}

template <typename T>
T parse_int(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("invalid value for " + key + ": '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid value for " + key + ": '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = text.find(sep, pos);
    out.push_back(text.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return out;
}

// NAME=POS/POS[:COUNT],...
std::vector<Slot> parse_slots(const std::string& text) {
  std::vector<Slot> slots;
  for (const std::string& item : split(text, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("slot '" + item + "' is not NAME=POSITIONS");
    Slot slot;
    slot.name = item.substr(0, eq);
    std::string positions = item.substr(eq + 1);
    if (const std::size_t colon = positions.find(':'); colon != std::string::npos) {
      slot.count = parse_int<int>("slots", positions.substr(colon + 1));
      positions.resize(colon);
    }
    const auto set = PositionSet::parse(positions);
    if (!set) throw ConfigError("slot '" + item + "' has invalid positions");
    slot.eligible = *set;
    slots.push_back(std::move(slot));
  }
  return slots;
}

RosterRules rules_from(const Settings& s) {
  const bool util_pitcher = parse_bool("util_pitcher", get(s, "util_pitcher").value_or("false"));
  RosterRules rules = RosterRules::fanduel_mlb(util_pitcher);
  if (auto slots = get(s, "slots")) {
    rules = RosterRules(parse_slots(*slots), rules.salary_cap());
  }
  if (auto cap = get(s, "salary_cap")) {
    rules = rules.with_salary_cap(parse_int<std::int64_t>("salary_cap", *cap));
  }
  return rules;
}

PortfolioConfig portfolio_from(const Settings& s) {
  PortfolioConfig cfg;
  if (auto v = get(s, "n")) cfg.n_lineups = parse_int<int>("n", *v);
  if (auto v = get(s, "max_overlap")) cfg.max_overlap = parse_int<int>("max_overlap", *v);
  if (auto v = get(s, "max_exposure")) {
    if (v->find('.') != std::string::npos) {
      double f = 0;
      const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), f);
      if (ec != std::errc() || ptr != v->data() + v->size()) {
        throw ConfigError("invalid value for max_exposure: '" + *v + "'");
      }
      cfg.max_exposure = ExposureCap::fraction(f);
    } else {
      cfg.max_exposure = ExposureCap::count(parse_int<int>("max_exposure", *v));
    }
  }
  if (auto v = get(s, "stack")) {
    const std::size_t x = v->find('x');
    if (x == std::string::npos) throw ConfigError("stack must be SIZExCOUNT, got '" + *v + "'");
    cfg.stacking = StackSpec{parse_int<int>("stack", v->substr(0, x)),
                             parse_int<int>("stack", v->substr(x + 1))};
  }
  for (const auto& [key, target] : {std::pair{"lock", &cfg.locks}, std::pair{"exclude", &cfg.excludes}}) {
    if (auto v = get(s, key); v && !v->empty()) {
      for (auto& id : split(*v, ',')) target->insert(id);
    }
  }
  if (auto v = get(s, "objective")) {
    const auto src = parse_objective_source(*v);
    if (!src) throw ConfigError("objective must be projection, ceiling or actual");
    cfg.objective_source = *src;
  }
  return cfg;
}

OutputFormat format_from(const Settings& s) {
  const std::string text = get(s, "format").value_or("json");
  const auto f = parse_output_format(text);
  if (!f) throw ConfigError("format must be json or csv");
  return *f;
}

std::chrono::year_month_day date_for(const Settings& s, const fs::path& slate_path) {
  if (auto v = get(s, "date")) {
    const auto d = parse_date(*v);
    if (!d) throw ConfigError("date must be YYYY-MM-DD, got '" + *v + "'");
    return *d;
  }
  return parse_date(slate_path.stem().string()).value_or(std::chrono::year_month_day{});
}

// Returns nullopt after reporting diagnostics.
std::optional<Slate> load_slate(const fs::path& path, std::chrono::year_month_day date,
                                const ColumnMap& columns, std::ostream& err) {
  SlateParse parsed = parse_slate_csv(read_file(path), date, columns);
  for (const auto& d : parsed.diagnostics) err << path.string() << ": " << d.to_string() << "\n";
  return std::move(parsed.slate);
}

void report(const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) err << d.to_string() << "\n";
}

void write_result(const Settings& s, const std::string& text, std::ostream& out) {
  if (auto path = get(s, "out"); path && !path->empty()) {
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !(f.flush())) throw DataError("cannot write '" + *path + "'");
    return;
  }
  out << text;
}

fs::path required_path(const Settings& s, const std::string& key) {
  auto v = get(s, key);
  if (!v || v->empty()) throw ConfigError("--" + key + " is required");
  return *v;
}

int run_command(const std::string& command, const Settings& s, std::ostream& out,
                std::ostream& err) {
  const RosterRules rules = rules_from(s);
  const OutputFormat format = format_from(s);
  const ColumnMap columns = get(s, "map") ? parse_column_map(*get(s, "map")) : ColumnMap{};

  if (command == "backtest") {
    const fs::path dir = required_path(s, "dir");
    if (!fs::is_directory(dir)) throw DataError("not a directory: '" + dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path& p = entry.path();
      if (entry.is_regular_file() && p.extension() == ".csv" && parse_date(p.stem().string())) {
        files.push_back(p);
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<Slate> slates;
    for (const auto& p : files) {
      if (auto slate = load_slate(p, *parse_date(p.stem().string()), columns, err)) {
        slates.push_back(std::move(*slate));
      } else {
        err << "warning: skipping " << p.filename().string() << "\n";
      }
    }
    if (slates.empty()) throw DataError("no usable slate files in '" + dir.string() + "'");
    const BacktestReport rep = backtest_range(slates, rules);
    report(rep.diagnostics, err);
    write_result(s, emit_backtest_report(rep, format), out);
    return kExitOk;
  }

  const fs::path slate_path = required_path(s, "slate");
  const auto slate = load_slate(slate_path, date_for(s, slate_path), columns, err);
  if (!slate) return kExitData;

  if (command == "optimize") {
    PortfolioConfig cfg = portfolio_from(s);
    cfg.n_lineups = 1;
    Portfolio p;
    p.config = cfg;
    p.lineups.push_back(optimize_lineup(*slate, rules, cfg));
    for (const auto& a : p.lineups.front().assignments) ++p.exposure[a.player_id];
    write_result(s, emit_lineups(p, rules, format), out);
    return kExitOk;
  }
  if (command == "portfolio") {
    const Portfolio p = generate_portfolio(*slate, rules, portfolio_from(s));
    report(p.diagnostics, err);
    write_result(s, emit_lineups(p, rules, format), out);
    return kExitOk;
  }
  if (command == "evaluate") {
    const auto kind = parse_r_squared_kind(get(s, "r2").value_or("determination"));
    if (!kind) throw ConfigError("r2 must be determination or correlation");
    const AccuracyReport rep = describe(*slate, *kind);
    if (rep.n_dropped > 0) {
      err << "warning: " << rep.n_dropped << " players without an actual score were dropped\n";
    }
    if (!rep.r_squared) err << "warning: R² is undefined for this slate\n";
    write_result(s, emit_accuracy_report(rep, format), out);
    return kExitOk;
  }
  // scatter
  write_result(s, emit_scatter_data(*slate), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Daily fantasy baseball lineup optimizer", "dfsopt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;
  std::map<std::string, std::unique_ptr<Bindings>> bindings;
  auto add = [&](const std::string& name, const std::string& description) {
    CLI::App* sub = app.add_subcommand(name, description);
    auto& b = *bindings.emplace(name, std::make_unique<Bindings>()).first->second;
    sub->add_option("--config", config_path, "key=value settings file");
    if (name == "backtest") {
      b.value(sub, "dir", "Directory of YYYY-MM-DD.csv slates");
    } else {
      b.value(sub, "slate", "Slate CSV file");
      b.value(sub, "date", "Slate date, YYYY-MM-DD");
    }
    b.value(sub, "salary_cap", "Salary cap");
    b.value(sub, "slots", "Slot table NAME=POS/POS[:COUNT],...");
    b.flag(sub, "util_pitcher", "Let pitchers fill UTIL");
    b.value(sub, "map", "Column renames FROM=TO,...");
    b.value(sub, "out", "Write results here instead of standard output");
    if (name != "scatter") b.value(sub, "format", "json or csv");
    return std::pair{sub, &b};
  };

  for (const char* name : {"optimize", "portfolio"}) {
    auto [sub, b] = add(name, std::string(name) == "optimize" ? "Best single lineup"
                                                              : "Several lineups with overlap and exposure limits");
    if (std::string(name) == "portfolio") {
      b->value(sub, "n", "Number of lineups");
      b->value(sub, "max_overlap", "Most players two lineups may share");
      b->value(sub, "max_exposure", "Per-player cap: a count, or a fraction such as 0.3");
    }
    b->value(sub, "stack", "Team stacking SIZExCOUNT, e.g. 4x1");
    b->list(sub, "lock", "Player id that must be in every lineup");
    b->list(sub, "exclude", "Player id to leave out");
    b->value(sub, "objective", "projection, ceiling or actual");
  }
  {
    auto [sub, b] = add("evaluate", "Projection accuracy statistics");
    b->value(sub, "r2", "determination or correlation");
  }
  add("backtest", "Projected versus hindsight-optimal lineups per day");
  add("scatter", "Projection versus actual points, CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    Settings settings;
    if (!config_path.empty()) {
      std::string text;
      try {
        text = read_file(config_path);
      } catch (const DataError& e) {
        throw ConfigError(e.what());
      }
      settings = parse_config_text(text);
      for (const auto& [key, value] : settings) {
        if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
      }
    }
    bindings.at(command)->overlay(settings);
    return run_command(command, settings, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace dfsopt
