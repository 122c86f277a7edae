#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dfsopt::binprog {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  std::size_t var = 0;
  std::int64_t coef = 0;
  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  std::int64_t rhs = 0;
  std::string label;  // informational only

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// Maximize objective . x subject to the constraints, x in {0,1}^n_vars.
struct BinaryProgram {
  std::size_t n_vars = 0;
  std::vector<std::int64_t> objective;
  std::vector<LinearConstraint> constraints;

  // Throws std::invalid_argument on out-of-range or repeated indices, or
  // an objective whose length is not n_vars.
  void validate() const;
  friend bool operator==(const BinaryProgram&, const BinaryProgram&) = default;
};

enum class Status { Optimal, Infeasible };

struct Solution {
  Status status = Status::Infeasible;
  std::vector<std::size_t> selected;  // ascending
  std::int64_t objective_value = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
};

// Exact branch-and-bound with a dual-simplex LP bound. Branches on the
// lowest-index fractional variable, inclusion branch first.
//
// Throws std::invalid_argument("empty program") for n_vars == 0 and
// std::overflow_error("coefficient overflow") when the objective or any
// row could reach 2^62 in absolute value.
Solution solve(const BinaryProgram& program, SolveStats* stats = nullptr);

// Exhaustive enumeration; ties go to the lexicographically smallest
// ascending index sequence. Throws std::invalid_argument("oracle bound
// exceeded") above 25 variables.
Solution brute_force_solve(const BinaryProgram& program);

// Exact integer feasibility of the given selection.
bool is_feasible(const BinaryProgram& program, std::span<const std::size_t> selected);
std::int64_t objective_of(const BinaryProgram& program,
                          std::span<const std::size_t> selected);

inline constexpr std::size_t kOracleMaxVars = 25;

}  // namespace dfsopt::binprog
