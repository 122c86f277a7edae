#include "dfsopt/binprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "dual_simplex.hpp"

namespace dfsopt::binprog {

namespace {

constexpr std::uint64_t kMagnitudeLimit = std::uint64_t{1} << 62;
constexpr double kIntegralityTol = 1e-6;
// Objective values are integers: a subtree can only improve on the
// incumbent if its bound reaches incumbent + 1. Half a unit of slack
// absorbs floating-point error in the LP bound.
constexpr double kPruneMargin = 0.5;

std::uint64_t magnitude(std::int64_t v) {
  return v < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(v)
               : static_cast<std::uint64_t>(v);
}

void check_magnitudes(const BinaryProgram& program) {
  auto overflow = [] { throw std::overflow_error("coefficient overflow"); };
  std::uint64_t sum = 0;
  for (std::int64_t c : program.objective) {
    sum += magnitude(c);
    if (sum > kMagnitudeLimit) overflow();
  }
  for (const LinearConstraint& row : program.constraints) {
    std::uint64_t row_sum = magnitude(row.rhs);
    if (row_sum > kMagnitudeLimit) overflow();
    for (const Term& t : row.terms) {
      row_sum += magnitude(t.coef);
      if (row_sum > kMagnitudeLimit) overflow();
    }
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("coefficient overflow");
  return out;
}

struct Node {
  std::vector<std::pair<std::size_t, bool>> fixes;
  double parent_bound = std::numeric_limits<double>::infinity();
};

}  // namespace

void BinaryProgram::validate() const {
  if (n_vars == 0) throw std::invalid_argument("empty program");
  if (objective.size() != n_vars) {
    throw std::invalid_argument("objective length does not match n_vars");
  }
  std::vector<std::size_t> stamp(n_vars, 0);
  std::size_t row_id = 0;
  for (const LinearConstraint& row : constraints) {
    ++row_id;
    for (const Term& t : row.terms) {
      if (t.var >= n_vars) {
        throw std::invalid_argument("constraint references variable " +
                                    std::to_string(t.var) + " >= n_vars");
      }
      if (stamp[t.var] == row_id) {
        throw std::invalid_argument("variable " + std::to_string(t.var) +
                                    " repeated within a constraint");
      }
      stamp[t.var] = row_id;
    }
  }
}

bool is_feasible(const BinaryProgram& program, std::span<const std::size_t> selected) {
  std::vector<char> on(program.n_vars, 0);
  for (std::size_t v : selected) on.at(v) = 1;
  for (const LinearConstraint& row : program.constraints) {
    std::int64_t lhs = 0;
    for (const Term& t : row.terms) {
      if (on[t.var]) lhs = checked_add(lhs, t.coef);
    }
    switch (row.sense) {
      case Sense::LessEqual:
        if (lhs > row.rhs) return false;
        break;
      case Sense::GreaterEqual:
        if (lhs < row.rhs) return false;
        break;
      case Sense::Equal:
        if (lhs != row.rhs) return false;
        break;
    }
  }
  return true;
}

std::int64_t objective_of(const BinaryProgram& program,
                          std::span<const std::size_t> selected) {
  std::int64_t total = 0;
  for (std::size_t v : selected) total = checked_add(total, program.objective.at(v));
  return total;
}

namespace {

// A program with some variables fixed, re-indexed over the free ones.
struct Reduction {
  BinaryProgram program;
  std::vector<std::size_t> original;  // reduced var -> original var
  std::vector<std::size_t> fixed_one;
  std::int64_t objective_offset = 0;
  bool infeasible = false;
};

// `fix[j]` is -1 for free, else the fixed value. Rows that can no longer
// be violated are dropped; rows left without free terms are checked.
Reduction reduce(const BinaryProgram& program, const std::vector<int>& fix) {
  Reduction red;
  std::vector<std::size_t> index(program.n_vars, 0);
  for (std::size_t j = 0; j < program.n_vars; ++j) {
    if (fix[j] < 0) {
      index[j] = red.original.size();
      red.original.push_back(j);
      red.program.objective.push_back(program.objective[j]);
    } else if (fix[j] == 1) {
      red.fixed_one.push_back(j);
      red.objective_offset += program.objective[j];
    }
  }
  red.program.n_vars = red.original.size();
  for (const LinearConstraint& row : program.constraints) {
    LinearConstraint out{{}, row.sense, row.rhs, row.label};
    std::int64_t min_act = 0;
    std::int64_t max_act = 0;
    for (const Term& t : row.terms) {
      if (fix[t.var] < 0) {
        out.terms.push_back({index[t.var], t.coef});
        (t.coef > 0 ? max_act : min_act) += t.coef;
      } else if (fix[t.var] == 1) {
        out.rhs -= t.coef;
      }
    }
    const bool le_slack = max_act <= out.rhs;
    const bool ge_slack = min_act >= out.rhs;
    const bool le_dead = min_act > out.rhs;
    const bool ge_dead = max_act < out.rhs;
    switch (row.sense) {
      case Sense::LessEqual:
        if (le_dead) red.infeasible = true;
        if (le_slack) continue;
        break;
      case Sense::GreaterEqual:
        if (ge_dead) red.infeasible = true;
        if (ge_slack) continue;
        break;
      case Sense::Equal:
        if (le_dead || ge_dead) red.infeasible = true;
        if (le_slack && ge_slack) continue;
        break;
    }
    red.program.constraints.push_back(std::move(out));
  }
  return red;
}

struct Incumbent {
  std::int64_t value = 0;
  std::vector<std::size_t> selected;
  bool found = false;  // false: `value` is only a cutoff to beat
};

// Restart into a compacted program once root reduced costs fix at least
// this share of the variables.
constexpr double kRestartFraction = 0.25;
constexpr int kMaxRestartDepth = 4;

void branch_and_bound(const BinaryProgram& program, std::optional<std::int64_t> cutoff,
                      int depth, Incumbent& out, SolveStats& stats) {
  const std::size_t n = program.n_vars;
  if (n == 0) {
    if (is_feasible(program, {}) && (!cutoff || 0 > *cutoff)) {
      out = {0, {}, true};
    }
    return;
  }

  double scale = 1.0;
  for (std::int64_t c : program.objective) {
    scale = std::max(scale, std::abs(static_cast<double>(c)));
  }
  std::vector<double> cost(n);
  for (std::size_t j = 0; j < n; ++j) cost[j] = static_cast<double>(program.objective[j]) / scale;
  detail::DualSimplex lp(program, std::move(cost));

  Incumbent best;
  if (cutoff) best.value = *cutoff;
  const bool have_cutoff = cutoff.has_value();
  auto can_improve = [&](double bound) {
    return !(best.found || have_cutoff) ||
           bound >= static_cast<double>(best.value) + kPruneMargin;
  };

  // Root reduced costs, kept for the restart decision.
  double root_bound = 0.0;
  std::vector<double> root_d;
  std::vector<double> root_val;
  bool restart_checked = depth >= kMaxRestartDepth;

  std::vector<Node> stack;
  stack.push_back(Node{});
  std::vector<double> lower(n), upper(n), x;
  std::vector<std::size_t> candidate;

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (!can_improve(node.parent_bound)) continue;
    const bool at_root = node.fixes.empty() && root_d.empty();
    ++stats.nodes;

    std::fill(lower.begin(), lower.end(), 0.0);
    std::fill(upper.begin(), upper.end(), 1.0);
    for (auto [var, value] : node.fixes) lower[var] = upper[var] = value ? 1.0 : 0.0;
    lp.set_structural_bounds(lower, upper);

    const auto result = lp.solve();
    if (result == detail::DualSimplex::Result::Infeasible) continue;
    const bool lp_ok = result == detail::DualSimplex::Result::Optimal;
    const double bound =
        lp_ok ? lp.bound() * scale : std::numeric_limits<double>::infinity();
    if (at_root && lp_ok) {
      root_bound = bound;
      root_d.resize(n);
      root_val.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        root_d[j] = lp.is_basic(j) ? 0.0 : lp.reduced_cost(j) * scale;
        root_val[j] = lp.is_basic(j) ? -1.0 : lp.nonbasic_value(j);
      }
    }
    if (!can_improve(bound)) continue;

    std::size_t branch = n;
    if (lp_ok) {
      // Dive toward the LP point: branch on the fractional variable with
      // the largest value, lowest index on ties.
      lp.structural_values(x);
      double best_x = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (lower[j] < upper[j] && x[j] > kIntegralityTol && x[j] < 1.0 - kIntegralityTol &&
            x[j] > best_x) {
          branch = j;
          best_x = x[j];
        }
      }
      if (branch == n) {
        candidate.clear();
        for (std::size_t j = 0; j < n; ++j) {
          if (x[j] > 0.5) candidate.push_back(j);
        }
        if (is_feasible(program, candidate)) {
          const std::int64_t value = objective_of(program, candidate);
          if (!(best.found || have_cutoff) || value > best.value) {
            best = {value, candidate, true};
          }
          // The integral LP optimum closes the subtree unless residual
          // dual infeasibility left the bound visibly above it.
          if (bound < static_cast<double>(value) + 1.0 - kPruneMargin) continue;
        }
      }
    }

    if (best.found && !restart_checked && !root_d.empty()) {
      restart_checked = true;
      const double gap = root_bound - (static_cast<double>(best.value) + kPruneMargin);
      std::vector<int> fix(n, -1);
      std::size_t fixed = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (root_val[j] == 0.0 && -root_d[j] > gap) fix[j] = 0;
        else if (root_val[j] == 1.0 && root_d[j] > gap) fix[j] = 1;
        if (fix[j] >= 0) ++fixed;
      }
      if (static_cast<double>(fixed) >= kRestartFraction * static_cast<double>(n)) {
        const Reduction red = reduce(program, fix);
        if (!red.infeasible) {
          Incumbent sub;
          branch_and_bound(red.program, best.value - red.objective_offset, depth + 1, sub,
                           stats);
          if (sub.found) {
            best.value = sub.value + red.objective_offset;
            best.selected = red.fixed_one;
            for (std::size_t v : sub.selected) best.selected.push_back(red.original[v]);
            std::sort(best.selected.begin(), best.selected.end());
          }
        }
        stats.lp_iterations += lp.iterations();
        out = std::move(best);
        if (!out.found && have_cutoff) out.value = *cutoff;
        return;
      }
    }

    if (branch == n) {
      for (std::size_t j = 0; j < n; ++j) {
        if (lower[j] < upper[j]) {
          branch = j;
          break;
        }
      }
      if (branch == n) continue;  // everything fixed; exact check decided it
    }

    std::vector<std::pair<std::size_t, bool>> fixes = std::move(node.fixes);
    if (best.found && lp_ok) {
      // Reduced-cost fixing: flipping a nonbasic column costs at least
      // |d_j|, so columns whose flip drops below incumbent + 1 are fixed.
      const double gap =
          (lp.bound() * scale - (static_cast<double>(best.value) + kPruneMargin)) / scale;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == branch || lower[j] == upper[j] || lp.is_basic(j)) continue;
        const double dj = lp.reduced_cost(j);
        const double v = lp.nonbasic_value(j);
        if (v == 0.0 && -dj > gap) fixes.emplace_back(j, false);
        else if (v == 1.0 && dj > gap) fixes.emplace_back(j, true);
      }
    }
    Node exclude{fixes, bound};
    exclude.fixes.emplace_back(branch, false);
    Node include{std::move(fixes), bound};
    include.fixes.emplace_back(branch, true);
    stack.push_back(std::move(exclude));
    stack.push_back(std::move(include));
  }
  stats.lp_iterations += lp.iterations();
  out = std::move(best);
}

}  // namespace

Solution solve(const BinaryProgram& program, SolveStats* stats) {
  program.validate();
  check_magnitudes(program);
  SolveStats local;
  Incumbent best;
  branch_and_bound(program, std::nullopt, 0, best, local);
  if (stats != nullptr) *stats = local;
  Solution sol;
  if (best.found) {
    sol.status = Status::Optimal;
    sol.selected = std::move(best.selected);
    sol.objective_value = best.value;
  }
  return sol;
}

Solution brute_force_solve(const BinaryProgram& program) {
  program.validate();
  if (program.n_vars > kOracleMaxVars) throw std::invalid_argument("oracle bound exceeded");
  check_magnitudes(program);
  const std::size_t n = program.n_vars;

  Solution best;
  std::vector<std::size_t> selected;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    selected.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1u) selected.push_back(j);
    }
    if (!is_feasible(program, selected)) continue;
    const std::int64_t value = objective_of(program, selected);
    const bool better = best.status == Status::Infeasible || value > best.objective_value ||
                        (value == best.objective_value &&
                         std::lexicographical_compare(selected.begin(), selected.end(),
                                                      best.selected.begin(),
                                                      best.selected.end()));
    if (better) {
      best.status = Status::Optimal;
      best.objective_value = value;
      best.selected = selected;
    }
  }
  return best;
}

}  // namespace dfsopt::binprog
