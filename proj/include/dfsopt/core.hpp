#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfsopt/points.hpp"

namespace dfsopt {

enum class Position : std::uint8_t { P, C, B1, B2, B3, SS, OF };

inline constexpr std::array<Position, 7> kAllPositions = {
    Position::P,  Position::C,  Position::B1, Position::B2,
    Position::B3, Position::SS, Position::OF};

// Rendered as "P", "C", "1B", "2B", "3B", "SS", "OF".
std::string_view to_string(Position pos);
std::optional<Position> parse_position(std::string_view token);

/// Small bit set over the seven roster positions.
class PositionSet {
 public:
  constexpr PositionSet() = default;
  constexpr PositionSet(std::initializer_list<Position> positions) {
    for (Position p : positions) insert(p);
  }

  constexpr void insert(Position p) { bits_ |= bit(p); }
  constexpr bool contains(Position p) const { return (bits_ & bit(p)) != 0; }
  constexpr bool intersects(PositionSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  // True when the set holds any position other than P.
  constexpr bool has_hitter_position() const {
    return (bits_ & ~bit(Position::P)) != 0;
  }
  friend constexpr bool operator==(PositionSet, PositionSet) = default;

  // Slash-separated in canonical order, e.g. "C/1B".
  std::string to_string() const;
  // Parses "C/1B"; separators '/' only; duplicates allowed; empty rejected.
  static std::optional<PositionSet> parse(std::string_view text);

 private:
  static constexpr std::uint8_t bit(Position p) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(p));
  }
  std::uint8_t bits_ = 0;
};

struct Player {
  std::string id;
  std::string name;
  std::string team;
  PositionSet positions;
  std::int64_t salary = 0;
  Points projection;
  std::optional<Points> ceiling;
  std::optional<Points> actual;

  bool is_hitter() const { return positions.has_hitter_position(); }
};

struct Slot {
  std::string name;
  PositionSet eligible;
  int count = 1;
};

// One concrete seat of a slot, e.g. "OF2" for the second OF seat.
struct SlotUnit {
  std::string name;
  std::size_t slot = 0;
};

/// Contest roster schema: ordered slot table plus salary cap.
class RosterRules {
 public:
  // Throws ConfigError when the table is empty, a count is < 1, a slot
  // name repeats, a slot admits no position, or the cap is not positive.
  RosterRules(std::vector<Slot> slots, std::int64_t salary_cap);

  // P, C/1B, 2B, 3B, SS, OF x3, UTIL with a 35000 cap. UTIL admits every
  // hitter position, and P as well when `util_includes_pitcher` is set.
  static RosterRules fanduel_mlb(bool util_includes_pitcher = false);

  const std::vector<Slot>& slots() const { return slots_; }
  std::int64_t salary_cap() const { return salary_cap_; }
  int roster_size() const { return roster_size_; }
  // Seats in slot order; multi-count slots are numbered from 1.
  const std::vector<SlotUnit>& slot_units() const { return units_; }
  // Seats that admit at least one non-pitcher position.
  int hitter_slot_count() const;

  RosterRules with_salary_cap(std::int64_t cap) const {
    return RosterRules(slots_, cap);
  }

 private:
  std::vector<Slot> slots_;
  std::int64_t salary_cap_;
  int roster_size_ = 0;
  std::vector<SlotUnit> units_;
};

struct Slate {
  std::chrono::year_month_day date{};
  std::vector<Player> players;

  const Player* find(std::string_view id) const;
  // Throws DataError naming the id when absent.
  const Player& at(std::string_view id) const;
};

std::string format_date(std::chrono::year_month_day date);
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::optional<std::size_t> line;  // 1-based source line, when known
  std::string subject;              // usually a player id
  std::string rule;
  std::string message;

  std::string to_string() const;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct SlotAssignment {
  std::string slot;  // slot unit name
  std::string player_id;
  friend bool operator==(const SlotAssignment&, const SlotAssignment&) = default;
};

struct Lineup {
  std::vector<SlotAssignment> assignments;  // one per slot unit, slot order
  std::int64_t total_salary = 0;
  Points total_projection;
  std::optional<Points> total_actual;

  // Player ids sorted ascending.
  std::vector<std::string> player_ids() const;
  friend bool operator==(const Lineup&, const Lineup&) = default;
};

struct LineupTotals {
  std::int64_t salary = 0;
  Points projection;
  std::optional<Points> actual;
  friend bool operator==(const LineupTotals&, const LineupTotals&) = default;
};

// Empty result iff every slate invariant holds. Output is sorted by
// (subject, rule) so it does not depend on the player order.
std::vector<Diagnostic> validate_slate(const Slate& slate);

// Sums over the given players. `actual` is absent if any member lacks one.
// Throws DataError on an unknown id.
LineupTotals lineup_totals(std::span<const std::string> ids, const Slate& slate);

// Full feasibility check of a lineup against a slate and roster rules.
// Throws DataError on an unknown player id.
bool check_lineup(const Lineup& lineup, const Slate& slate, const RosterRules& rules);

// Number of players shared by two lineups.
int overlap(const Lineup& a, const Lineup& b);

}  // namespace dfsopt
