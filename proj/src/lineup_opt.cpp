#include "dfsopt/lineup_opt.hpp"

#include <algorithm>
#include <cmath>

#include "dfsopt/error.hpp"

namespace dfsopt {

namespace {

using binprog::LinearConstraint;
using binprog::Sense;

std::string infeasibility_hint(const LineupProgram& lp) {
  if (lp.program.n_vars == 0) return "no eligible players";
  binprog::BinaryProgram relaxed = lp.program;
  std::erase_if(relaxed.constraints,
                [](const LinearConstraint& row) { return row.label == "salary"; });
  if (binprog::solve(relaxed).status == binprog::Status::Optimal) {
    return "salary cap is binding: every eligible lineup costs more than the cap";
  }
  bool extra_rows = false;
  for (const auto& row : lp.program.constraints) {
    if (row.label.starts_with("overlap:") || row.label.starts_with("lock:") ||
        row.label.starts_with("stack")) {
      extra_rows = true;
    }
  }
  return extra_rows ? "eligibility shortfall under lock, stack, or overlap constraints"
                    : "eligibility shortfall: not enough eligible players to fill every slot";
}

binprog::Solution solve_lineup(const LineupProgram& lp) {
  if (lp.program.n_vars == 0) return {};
  return binprog::solve(lp.program);
}

}  // namespace

std::string_view to_string(ObjectiveSource source) {
  switch (source) {
    case ObjectiveSource::Projection: return "projection";
    case ObjectiveSource::Ceiling: return "ceiling";
    case ObjectiveSource::Actual: return "actual";
  }
  return "?";
}

std::optional<ObjectiveSource> parse_objective_source(std::string_view text) {
  for (auto s : {ObjectiveSource::Projection, ObjectiveSource::Ceiling, ObjectiveSource::Actual}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

int ExposureCap::resolve(int n_lineups) const {
  if (kind == Kind::Count) return static_cast<int>(value);
  return std::max(1, static_cast<int>(std::floor(value * n_lineups + 1e-9)));
}

void PortfolioConfig::validate(const RosterRules& rules) const {
  if (n_lineups < 1 || n_lineups > kMaxLineups) {
    throw ConfigError("n_lineups must be in [1, " + std::to_string(kMaxLineups) + "]");
  }
  const int limit = overlap_limit(rules);
  if (limit < 0 || limit >= rules.roster_size()) {
    throw ConfigError("max_overlap must be in [0, " + std::to_string(rules.roster_size() - 1) +
                      "]");
  }
  if (max_exposure) {
    if (max_exposure->kind == ExposureCap::Kind::Count && max_exposure->value < 1) {
      throw ConfigError("max_exposure count must be >= 1");
    }
    if (max_exposure->kind == ExposureCap::Kind::Fraction &&
        !(max_exposure->value > 0 && max_exposure->value <= 1)) {
      throw ConfigError("max_exposure fraction must be in (0, 1]");
    }
  }
  if (stacking && (stacking->size < 2 || stacking->count < 1)) {
    throw ConfigError("stack size must be >= 2 and stack count >= 1");
  }
  for (const auto& id : locks) {
    if (excludes.contains(id)) {
      throw ConfigError("player '" + id + "' is both locked and excluded");
    }
  }
}

std::optional<Points> objective_points(const Player& player, ObjectiveSource source) {
  switch (source) {
    case ObjectiveSource::Projection: return player.projection;
    case ObjectiveSource::Ceiling: return player.ceiling;
    case ObjectiveSource::Actual: return player.actual;
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kMaxSlotGroups = 20;

std::uint32_t eligible_slots(const Player& player, const RosterRules& rules) {
  std::uint32_t mask = 0;
  const auto& slots = rules.slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (player.positions.intersects(slots[s].eligible)) mask |= std::uint32_t{1} << s;
  }
  return mask;
}

std::string slot_set_label(std::uint32_t mask, const RosterRules& rules) {
  std::string out = "seats:";
  for (std::size_t s = 0; s < rules.slots().size(); ++s) {
    if (!(mask >> s & 1u)) continue;
    if (out.back() != ':') out += '+';
    out += rules.slots()[s].name;
  }
  return out;
}

// Kuhn augmenting path over seats; deterministic for a fixed input order.
bool augment(std::size_t member, const std::vector<std::vector<std::size_t>>& seats_of,
             std::vector<char>& visited, std::vector<std::ptrdiff_t>& seat_owner) {
  for (std::size_t seat : seats_of[member]) {
    if (visited[seat]) continue;
    visited[seat] = 1;
    if (seat_owner[seat] < 0 ||
        augment(static_cast<std::size_t>(seat_owner[seat]), seats_of, visited, seat_owner)) {
      seat_owner[seat] = static_cast<std::ptrdiff_t>(member);
      return true;
    }
  }
  return false;
}

}  // namespace

LineupProgram build_program(const Slate& slate, const RosterRules& rules,
                            const PortfolioConfig& config,
                            const std::vector<Lineup>& prior_lineups,
                            const std::set<std::string>& banned) {
  config.validate(rules);
  const auto& slots = rules.slots();
  if (slots.size() > kMaxSlotGroups) {
    throw ConfigError("roster rules: at most " + std::to_string(kMaxSlotGroups) +
                      " slot definitions are supported");
  }
  for (const auto& id : config.locks) {
    if (slate.find(id) == nullptr) {
      throw DataError("locked player '" + id + "' is not in the slate");
    }
  }

  LineupProgram lp;
  auto& prog = lp.program;
  std::vector<std::uint32_t> masks;
  for (std::size_t pi = 0; pi < slate.players.size(); ++pi) {
    const Player& player = slate.players[pi];
    const bool locked = config.locks.contains(player.id);
    if (config.excludes.contains(player.id)) continue;
    if (!locked && banned.contains(player.id)) continue;
    const std::uint32_t mask = eligible_slots(player, rules);
    if (mask == 0) {
      if (locked) {
        throw DataError("locked player '" + player.id + "' is not eligible for any slot");
      }
      continue;
    }
    const auto points = objective_points(player, config.objective_source);
    if (!points) {
      throw DataError("player '" + player.id + "' has no " +
                      std::string(to_string(config.objective_source)) + " value");
    }
    const std::size_t var = lp.players.size();
    lp.players.push_back(pi);
    masks.push_back(mask);
    prog.objective.push_back(points->micro());
    lp.player_indicator.emplace(player.id, std::vector<std::size_t>{var});
  }
  prog.n_vars = lp.players.size();

  {
    LinearConstraint row{{}, Sense::Equal, rules.roster_size(), "roster"};
    for (std::size_t v = 0; v < prog.n_vars; ++v) row.terms.push_back({v, 1});
    prog.constraints.push_back(std::move(row));
  }
  // Seat capacity for every proper slot subset that can actually bind.
  // Subsets selecting the same players keep only the tightest capacity.
  const std::uint32_t full = (std::uint32_t{1} << slots.size()) - 1;
  std::map<std::vector<std::size_t>, std::size_t> row_of_members;
  for (std::uint32_t subset = 1; subset < full; ++subset) {
    std::int64_t capacity = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (subset >> s & 1u) capacity += slots[s].count;
    }
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < prog.n_vars; ++v) {
      if ((masks[v] & ~subset) == 0) members.push_back(v);
    }
    if (static_cast<std::int64_t>(members.size()) <= capacity) continue;
    auto [it, inserted] = row_of_members.try_emplace(members, prog.constraints.size());
    if (!inserted) {
      auto& row = prog.constraints[it->second];
      if (capacity < row.rhs) {
        row.rhs = capacity;
        row.label = slot_set_label(subset, rules);
      }
      continue;
    }
    LinearConstraint row{{}, Sense::LessEqual, capacity, slot_set_label(subset, rules)};
    for (std::size_t v : members) row.terms.push_back({v, 1});
    prog.constraints.push_back(std::move(row));
  }
  {
    LinearConstraint row{{}, Sense::LessEqual, rules.salary_cap(), "salary"};
    for (std::size_t v = 0; v < prog.n_vars; ++v) {
      row.terms.push_back({v, slate.players[lp.players[v]].salary});
    }
    prog.constraints.push_back(std::move(row));
  }
  const int limit = config.overlap_limit(rules);
  for (std::size_t k = 0; k < prior_lineups.size(); ++k) {
    LinearConstraint row{{}, Sense::LessEqual, limit, "overlap:" + std::to_string(k + 1)};
    for (const auto& a : prior_lineups[k].assignments) {
      auto it = lp.player_indicator.find(a.player_id);
      if (it == lp.player_indicator.end()) continue;
      for (std::size_t v : it->second) row.terms.push_back({v, 1});
    }
    if (row.terms.empty()) continue;
    std::sort(row.terms.begin(), row.terms.end(),
              [](const auto& a, const auto& b) { return a.var < b.var; });
    prog.constraints.push_back(std::move(row));
  }
  for (const auto& id : config.locks) {
    LinearConstraint row{{}, Sense::Equal, 1, "lock:" + id};
    for (std::size_t v : lp.player_indicator.at(id)) row.terms.push_back({v, 1});
    prog.constraints.push_back(std::move(row));
  }

  if (config.stacking) return apply_stacking(std::move(lp), slate, rules, *config.stacking);
  return lp;
}

LineupProgram apply_stacking(LineupProgram lp, const Slate& slate, const RosterRules& rules,
                             StackSpec stack) {
  if (stack.size < 2 || stack.count < 1) {
    throw ConfigError("stack size must be >= 2 and stack count >= 1");
  }
  if (static_cast<long>(stack.size) * stack.count > rules.hitter_slot_count()) {
    throw ConfigError("stack demand exceeds roster: " + std::to_string(stack.size) + " x " +
                      std::to_string(stack.count) + " > " +
                      std::to_string(rules.hitter_slot_count()) + " hitter slots");
  }
  std::map<std::string, std::vector<std::size_t>> team_vars;
  for (std::size_t v = 0; v < lp.players.size(); ++v) {
    const Player& player = slate.players[lp.players[v]];
    if (player.is_hitter()) team_vars[player.team].push_back(v);
  }

  auto& prog = lp.program;
  LinearConstraint pick{{}, Sense::GreaterEqual, stack.count, "stack:teams"};
  for (auto& [team, vars] : team_vars) {
    const std::size_t y = prog.n_vars++;
    prog.objective.push_back(0);
    lp.stack_teams.push_back(team);
    LinearConstraint row{{}, Sense::GreaterEqual, 0, "stack:" + team};
    for (std::size_t v : vars) row.terms.push_back({v, 1});
    row.terms.push_back({y, -stack.size});
    prog.constraints.push_back(std::move(row));
    pick.terms.push_back({y, 1});
  }
  prog.constraints.push_back(std::move(pick));
  return lp;
}

Lineup decode_lineup(const LineupProgram& lp, const binprog::Solution& solution,
                     const Slate& slate, const RosterRules& rules) {
  std::vector<std::size_t> members;
  for (std::size_t v : solution.selected) {
    if (v < lp.players.size()) members.push_back(lp.players[v]);
  }
  std::sort(members.begin(), members.end());

  const auto& units = rules.slot_units();
  std::vector<std::vector<std::size_t>> seats_of(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (slate.players[members[k]].positions.intersects(rules.slots()[units[u].slot].eligible)) {
        seats_of[k].push_back(u);
      }
    }
  }
  std::vector<std::ptrdiff_t> seat_owner(units.size(), -1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    // Take the first free seat when there is one, so seating stays in slot order.
    const auto free_seat = std::find_if(seats_of[k].begin(), seats_of[k].end(),
                                        [&](std::size_t u) { return seat_owner[u] < 0; });
    if (free_seat != seats_of[k].end()) {
      seat_owner[*free_seat] = static_cast<std::ptrdiff_t>(k);
      continue;
    }
    std::vector<char> visited(units.size(), 0);
    if (!augment(k, seats_of, visited, seat_owner)) {
      throw Error("selected players cannot be seated");
    }
  }

  // Within a multi-seat slot, order occupants by slate position.
  std::vector<std::vector<std::size_t>> by_slot(rules.slots().size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (seat_owner[u] < 0) throw Error("decoded lineup leaves a slot empty");
    by_slot[units[u].slot].push_back(members[static_cast<std::size_t>(seat_owner[u])]);
  }
  for (auto& occupants : by_slot) std::sort(occupants.begin(), occupants.end());

  Lineup lineup;
  std::vector<std::size_t> next(by_slot.size(), 0);
  std::vector<std::string> ids;
  for (const SlotUnit& unit : units) {
    const std::string& id = slate.players[by_slot[unit.slot][next[unit.slot]++]].id;
    lineup.assignments.push_back({unit.name, id});
    ids.push_back(id);
  }
  const LineupTotals totals = lineup_totals(ids, slate);
  lineup.total_salary = totals.salary;
  lineup.total_projection = totals.projection;
  lineup.total_actual = totals.actual;
  return lineup;
}

Lineup optimize_lineup(const Slate& slate, const RosterRules& rules,
                       const PortfolioConfig& config) {
  const LineupProgram lp = build_program(slate, rules, config, {}, {});
  const binprog::Solution sol = solve_lineup(lp);
  if (sol.status != binprog::Status::Optimal) {
    throw InfeasibleError("no feasible lineup: " + infeasibility_hint(lp));
  }
  return decode_lineup(lp, sol, slate, rules);
}

Portfolio generate_portfolio(const Slate& slate, const RosterRules& rules,
                             const PortfolioConfig& config) {
  config.validate(rules);
  Portfolio out;
  out.config = config;

  std::optional<int> cap;
  if (config.max_exposure) cap = config.max_exposure->resolve(config.n_lineups);
  if (cap && config.n_lineups > *cap) {
    for (const auto& id : config.locks) {
      out.diagnostics.push_back(
          {Severity::Warning, std::nullopt, id, "lock overrides exposure",
           "locked player '" + id + "' will exceed the exposure cap of " +
               std::to_string(*cap)});
    }
  }

  for (int iteration = 1; iteration <= config.n_lineups; ++iteration) {
    std::set<std::string> banned;
    if (cap) {
      for (const auto& [id, count] : out.exposure) {
        if (count >= *cap && !config.locks.contains(id)) banned.insert(id);
      }
    }
    const LineupProgram lp = build_program(slate, rules, config, out.lineups, banned);
    const binprog::Solution sol = solve_lineup(lp);
    if (sol.status != binprog::Status::Optimal) {
      if (iteration == 1) throw InfeasibleError("no feasible lineup: " + infeasibility_hint(lp));
      out.diagnostics.push_back(
          {Severity::Warning, std::nullopt, "", "infeasible",
           "infeasible at iteration " + std::to_string(iteration) + ": stopped with " +
               std::to_string(out.lineups.size()) + " of " +
               std::to_string(config.n_lineups) + " lineups"});
      break;
    }
    Lineup lineup = decode_lineup(lp, sol, slate, rules);
    for (const auto& a : lineup.assignments) ++out.exposure[a.player_id];
    out.lineups.push_back(std::move(lineup));
  }
  return out;
}

}  // namespace dfsopt
