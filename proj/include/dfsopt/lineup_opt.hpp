#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dfsopt/binprog.hpp"
#include "dfsopt/core.hpp"

namespace dfsopt {

enum class ObjectiveSource { Projection, Ceiling, Actual };

std::string_view to_string(ObjectiveSource source);
std::optional<ObjectiveSource> parse_objective_source(std::string_view text);

// Per-player cap on the number of portfolio lineups. Either an absolute
// count or a fraction of n_lineups (floored, at least 1).
struct ExposureCap {
  enum class Kind { Count, Fraction };
  Kind kind = Kind::Count;
  double value = 0;

  static ExposureCap count(int n) { return {Kind::Count, static_cast<double>(n)}; }
  static ExposureCap fraction(double f) { return {Kind::Fraction, f}; }
  int resolve(int n_lineups) const;
};

struct StackSpec {
  int size = 0;   // hitters per stacked team, >= 2
  int count = 0;  // number of stacked teams, >= 1
};

inline constexpr int kMaxLineups = 150;

struct PortfolioConfig {
  int n_lineups = 1;
  std::optional<int> max_overlap;  // default roster_size - 1
  std::optional<ExposureCap> max_exposure;
  std::optional<StackSpec> stacking;
  std::set<std::string> locks;
  std::set<std::string> excludes;
  ObjectiveSource objective_source = ObjectiveSource::Projection;

  int overlap_limit(const RosterRules& rules) const {
    return max_overlap.value_or(rules.roster_size() - 1);
  }
  // Throws ConfigError when an invariant is violated.
  void validate(const RosterRules& rules) const;
};

/// A lineup problem lowered to a 0-1 program.
///
/// Variable v < players.size() selects slate.players[players[v]]. Seating
/// is enforced by capacity rows: for every set S of slots, the selected
/// players whose eligible slots all lie in S may not outnumber the seats
/// of S, and exactly roster_size players are selected. By Hall's theorem
/// such a selection always admits a seat assignment. Variables after the
/// player block are stacking auxiliaries, one per team in `stack_teams`.
struct LineupProgram {
  binprog::BinaryProgram program;
  std::vector<std::size_t> players;  // var -> index into slate.players
  std::map<std::string, std::vector<std::size_t>> player_indicator;
  std::vector<std::string> stack_teams;
};

// Points of a player under the chosen source; nullopt when absent.
std::optional<Points> objective_points(const Player& player, ObjectiveSource source);

LineupProgram build_program(const Slate& slate, const RosterRules& rules,
                            const PortfolioConfig& config,
                            const std::vector<Lineup>& prior_lineups,
                            const std::set<std::string>& banned);

// Adds team-stack rows: at least `stack.count` teams each contribute
// `stack.size` or more hitters. Throws ConfigError("stack demand exceeds
// roster") when size * count exceeds the hitter seats.
LineupProgram apply_stacking(LineupProgram lp, const Slate& slate, const RosterRules& rules,
                             StackSpec stack);

// Turns a solved selection back into a lineup.
Lineup decode_lineup(const LineupProgram& lp, const binprog::Solution& solution,
                     const Slate& slate, const RosterRules& rules);

// Throws InfeasibleError("no feasible lineup: ...") with a hint on the
// binding rule.
Lineup optimize_lineup(const Slate& slate, const RosterRules& rules,
                       const PortfolioConfig& config);

struct Portfolio {
  std::vector<Lineup> lineups;
  PortfolioConfig config;
  std::map<std::string, int> exposure;
  std::vector<Diagnostic> diagnostics;
};

// Iterative generation: each lineup is cut against all earlier ones and
// players at their exposure cap are dropped from the pool. Stops early
// with a diagnostic when an iteration after the first is infeasible.
Portfolio generate_portfolio(const Slate& slate, const RosterRules& rules,
                             const PortfolioConfig& config);

}  // namespace dfsopt
