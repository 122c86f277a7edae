#include "dfsopt/core.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dfsopt/error.hpp"

namespace dfsopt {

std::string_view to_string(Position pos) {
  switch (pos) {
    case Position::P: return "P";
    case Position::C: return "C";
    case Position::B1: return "1B";
    case Position::B2: return "2B";
    case Position::B3: return "3B";
    case Position::SS: return "SS";
    case Position::OF: return "OF";
  }
  return "?";
}

std::optional<Position> parse_position(std::string_view token) {
  for (Position p : kAllPositions) {
    if (to_string(p) == token) return p;
  }
  return std::nullopt;
}

std::string PositionSet::to_string() const {
  std::string out;
  for (Position p : kAllPositions) {
    if (!contains(p)) continue;
    if (!out.empty()) out += '/';
    out += dfsopt::to_string(p);
  }
  return out;
}

std::optional<PositionSet> PositionSet::parse(std::string_view text) {
  PositionSet set;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('/', start);
    if (end == std::string_view::npos) end = text.size();
    auto pos = parse_position(text.substr(start, end - start));
    if (!pos) return std::nullopt;
    set.insert(*pos);
    start = end + 1;
  }
  if (set.empty()) return std::nullopt;
  return set;
}

RosterRules::RosterRules(std::vector<Slot> slots, std::int64_t salary_cap)
    : slots_(std::move(slots)), salary_cap_(salary_cap) {
  if (slots_.empty()) throw ConfigError("roster rules: no slots");
  if (salary_cap_ <= 0) throw ConfigError("roster rules: salary cap must be positive");
  std::set<std::string> names;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    if (slot.name.empty()) throw ConfigError("roster rules: empty slot name");
    if (!names.insert(slot.name).second) {
      throw ConfigError("roster rules: duplicate slot name '" + slot.name + "'");
    }
    if (slot.count < 1) {
      throw ConfigError("roster rules: slot '" + slot.name + "' count must be >= 1");
    }
    if (slot.eligible.empty()) {
      throw ConfigError("roster rules: slot '" + slot.name + "' admits no position");
    }
    roster_size_ += slot.count;
    for (int k = 0; k < slot.count; ++k) {
      std::string unit = slot.count == 1 ? slot.name : slot.name + std::to_string(k + 1);
      units_.push_back({std::move(unit), s});
    }
  }
  std::set<std::string> unit_names;
  for (const SlotUnit& u : units_) {
    if (!unit_names.insert(u.name).second) {
      throw ConfigError("roster rules: slot unit name '" + u.name + "' is ambiguous");
    }
  }
}

RosterRules RosterRules::fanduel_mlb(bool util_includes_pitcher) {
  using P = Position;
  PositionSet util{P::C, P::B1, P::B2, P::B3, P::SS, P::OF};
  if (util_includes_pitcher) util.insert(P::P);
  return RosterRules(
      {
          {"P", {P::P}, 1},
          {"C/1B", {P::C, P::B1}, 1},
          {"2B", {P::B2}, 1},
          {"3B", {P::B3}, 1},
          {"SS", {P::SS}, 1},
          {"OF", {P::OF}, 3},
          {"UTIL", util, 1},
      },
      35000);
}

int RosterRules::hitter_slot_count() const {
  int n = 0;
  for (const Slot& s : slots_) {
    if (s.eligible.has_hitter_position()) n += s.count;
  }
  return n;
}

const Player* Slate::find(std::string_view id) const {
  for (const Player& p : players) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Player& Slate::at(std::string_view id) const {
  const Player* p = find(id);
  if (p == nullptr) throw DataError("unknown player id '" + std::string(id) + "'");
  return *p;
}

std::string format_date(std::chrono::year_month_day date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto num = [&](std::size_t off, std::size_t len, auto& out) {
    auto r = std::from_chars(text.data() + off, text.data() + off + len, out);
    return r.ec == std::errc() && r.ptr == text.data() + off + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(m),
                                  std::chrono::day(d)};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::string Diagnostic::to_string() const {
  std::string out = severity == Severity::Warning ? "warning: " : "error: ";
  if (line) out += "line " + std::to_string(*line) + ": ";
  out += message;
  return out;
}

std::vector<std::string> Lineup::player_ids() const {
  std::vector<std::string> ids;
  ids.reserve(assignments.size());
  for (const auto& a : assignments) ids.push_back(a.player_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Diagnostic> validate_slate(const Slate& slate) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string subject, std::string rule, std::string message) {
    out.push_back({Severity::Error, std::nullopt, std::move(subject), std::move(rule),
                   std::move(message)});
  };
  if (slate.players.empty()) add("", "empty slate", "slate has no players");

  std::map<std::string, int> id_counts;
  for (const Player& p : slate.players) {
    ++id_counts[p.id];
    if (p.id.empty()) add("", "empty id", "player with empty id");
    if (p.positions.empty()) {
      add(p.id, "no positions", "player '" + p.id + "' has no eligible position");
    }
    if (p.salary < 0) add(p.id, "negative salary", "player '" + p.id + "' has negative salary");
  }
  for (const auto& [id, count] : id_counts) {
    if (count > 1) {
      add(id, "duplicate id",
          "player id '" + id + "' appears " + std::to_string(count) + " times");
    }
  }
  std::sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.subject, a.rule, a.message) < std::tie(b.subject, b.rule, b.message);
  });
  // Duplicate ids repeat their per-row findings; keep one copy of each.
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LineupTotals lineup_totals(std::span<const std::string> ids, const Slate& slate) {
  LineupTotals t;
  t.actual = Points{};
  for (const std::string& id : ids) {
    const Player& p = slate.at(id);
    t.salary += p.salary;
    t.projection += p.projection;
    if (t.actual && p.actual) {
      *t.actual += *p.actual;
    } else {
      t.actual.reset();
    }
  }
  return t;
}

bool check_lineup(const Lineup& lineup, const Slate& slate, const RosterRules& rules) {
  std::vector<const Player*> members;
  members.reserve(lineup.assignments.size());
  for (const auto& a : lineup.assignments) members.push_back(&slate.at(a.player_id));

  const auto& units = rules.slot_units();
  if (lineup.assignments.size() != units.size()) return false;

  std::unordered_map<std::string_view, std::size_t> unit_slot;
  for (const SlotUnit& u : units) unit_slot.emplace(u.name, u.slot);

  std::unordered_set<std::string_view> seen_units;
  std::unordered_set<std::string_view> seen_players;
  for (std::size_t i = 0; i < lineup.assignments.size(); ++i) {
    const auto& a = lineup.assignments[i];
    auto it = unit_slot.find(a.slot);
    if (it == unit_slot.end()) return false;
    if (!seen_units.insert(a.slot).second) return false;
    if (!seen_players.insert(a.player_id).second) return false;
    if (!members[i]->positions.intersects(rules.slots()[it->second].eligible)) return false;
  }

  std::vector<std::string> ids;
  for (const auto& a : lineup.assignments) ids.push_back(a.player_id);
  const LineupTotals totals = lineup_totals(ids, slate);
  if (totals.salary > rules.salary_cap()) return false;
  return totals.salary == lineup.total_salary &&
         totals.projection == lineup.total_projection &&
         totals.actual == lineup.total_actual;
}

int overlap(const Lineup& a, const Lineup& b) {
  const auto ia = a.player_ids();
  const auto ib = b.player_ids();
  std::vector<std::string> common;
  std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(),
                        std::back_inserter(common));
  return static_cast<int>(common.size());
}

}  // namespace dfsopt
