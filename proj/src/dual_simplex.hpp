#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dfsopt/binprog.hpp"

namespace dfsopt::binprog::detail {

/// Bounded-variable dual simplex on a dense tableau.
///
/// Rows are equilibrated and given one slack each (a.x + s = b). Every
/// column is boxed: structurals by their branching bounds, slacks by the
/// activity range of their row over the unit box. With all columns boxed,
/// placing each nonbasic column at the bound matching the sign of its
/// reduced cost is always dual feasible, so changing structural bounds
/// between branch-and-bound nodes only requires dual simplex iterations
/// from the current basis.
class DualSimplex {
 public:
  enum class Result { Optimal, Infeasible, IterationLimit };

  DualSimplex(const BinaryProgram& program, std::vector<double> objective);

  std::size_t num_structural() const { return n_; }
  std::size_t num_rows() const { return m_; }

  void set_structural_bounds(std::span<const double> lower, std::span<const double> upper);
  Result solve();

  // Upper bound on the LP objective over the current box. Equals the
  // basic solution's objective when the basis is exactly dual feasible;
  // residual dual infeasibilities are charged at their full box width.
  double bound() const;

  void structural_values(std::vector<double>& out) const;
  bool is_basic(std::size_t col) const { return where_[col] >= 0; }
  double reduced_cost(std::size_t col) const { return d_[col]; }
  double nonbasic_value(std::size_t col) const { return val_[col]; }
  std::size_t iterations() const { return total_iterations_; }

 private:
  double& at(std::size_t row, std::size_t col) { return tab_[row * cols_ + col]; }
  double at(std::size_t row, std::size_t col) const { return tab_[row * cols_ + col]; }

  void place_nonbasic();
  // Rebuilds tab_, beta_ and d_ for the current basis from the original
  // rows. Falls back to the slack basis if the basis has become singular.
  void refactor();
  void eliminate(std::size_t row, std::size_t col);
  Result iterate();
  void recompute_basic_values();
  void pivot(std::size_t row, std::size_t col, double leaving_value);

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t cols_ = 0;  // n_ + m_
  std::vector<double> tab_;  // B^-1 [A | I], row-major
  std::vector<double> orig_tab_;
  std::vector<double> orig_beta_;
  std::vector<double> beta_;  // B^-1 b
  std::vector<double> xb_;  // basic values by row
  std::vector<double> d_;  // reduced costs (maximization)
  std::vector<double> cost_;  // structural objective
  std::vector<double> lo_, up_;
  std::vector<double> val_;  // nonbasic values
  std::vector<std::ptrdiff_t> where_;  // row if basic, else -1
  std::vector<std::size_t> head_;  // basic column per row
  std::vector<std::size_t> pivot_nz_;
  std::size_t total_iterations_ = 0;
  std::size_t since_refactor_ = 0;
};

}  // namespace dfsopt::binprog::detail
