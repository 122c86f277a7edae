#include "dual_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dfsopt::binprog::detail {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-11;
constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-13;

}  // namespace

DualSimplex::DualSimplex(const BinaryProgram& program, std::vector<double> objective)
    : m_(program.constraints.size()),
      n_(program.n_vars),
      cols_(program.n_vars + program.constraints.size()),
      tab_(m_ * cols_, 0.0),
      beta_(m_, 0.0),
      xb_(m_, 0.0),
      d_(cols_, 0.0),
      cost_(std::move(objective)),
      lo_(cols_, 0.0),
      up_(cols_, 0.0),
      val_(cols_, 0.0),
      where_(cols_, -1),
      head_(m_, 0) {
  for (std::size_t i = 0; i < m_; ++i) {
    const LinearConstraint& row = program.constraints[i];
    double scale = 1.0;
    for (const Term& t : row.terms) {
      scale = std::max(scale, std::abs(static_cast<double>(t.coef)));
    }
    double min_act = 0.0;
    double max_act = 0.0;
    for (const Term& t : row.terms) {
      const double a = static_cast<double>(t.coef) / scale;
      at(i, t.var) = a;
      (a > 0 ? max_act : min_act) += a;
    }
    const double b = static_cast<double>(row.rhs) / scale;
    beta_[i] = b;
    const std::size_t s = n_ + i;
    at(i, s) = 1.0;
    // s = b - a.x ranges over [b - max_act, b - min_act] on the unit box.
    switch (row.sense) {
      case Sense::LessEqual:
        lo_[s] = 0.0;
        up_[s] = std::max(0.0, b - min_act);
        break;
      case Sense::GreaterEqual:
        lo_[s] = std::min(0.0, b - max_act);
        up_[s] = 0.0;
        break;
      case Sense::Equal:
        lo_[s] = up_[s] = 0.0;
        break;
    }
    head_[i] = s;
    where_[s] = static_cast<std::ptrdiff_t>(i);
  }
  for (std::size_t j = 0; j < n_; ++j) {
    up_[j] = 1.0;
    d_[j] = cost_[j];
    val_[j] = d_[j] > 0 ? 1.0 : 0.0;
  }
  orig_tab_ = tab_;
  orig_beta_ = beta_;
}

void DualSimplex::eliminate(std::size_t r, std::size_t q) {
  double* prow = &tab_[r * cols_];
  const double inv = 1.0 / prow[q];
  pivot_nz_.clear();
  for (std::size_t k = 0; k < cols_; ++k) {
    if (prow[k] == 0.0) continue;
    prow[k] *= inv;
    if (std::abs(prow[k]) < kZeroTol) {
      prow[k] = 0.0;
      continue;
    }
    pivot_nz_.push_back(k);
  }
  prow[q] = 1.0;
  beta_[r] *= inv;
  const bool dense = pivot_nz_.size() * 4 > cols_;

  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* irow = &tab_[i * cols_];
    const double f = irow[q];
    if (f == 0.0) continue;
    if (dense) {
      for (std::size_t k = 0; k < cols_; ++k) irow[k] -= f * prow[k];
    } else {
      for (std::size_t k : pivot_nz_) irow[k] -= f * prow[k];
    }
    irow[q] = 0.0;
    beta_[i] -= f * beta_[r];
  }
  const double fd = d_[q];
  if (fd != 0.0) {
    for (std::size_t k : pivot_nz_) d_[k] -= fd * prow[k];
  }
  d_[q] = 0.0;

  const std::size_t leaving = head_[r];
  head_[r] = q;
  where_[q] = static_cast<std::ptrdiff_t>(r);
  where_[leaving] = -1;
}

void DualSimplex::refactor() {
  std::vector<std::size_t> basis = head_;
  std::sort(basis.begin(), basis.end());
  std::vector<char> wanted(cols_, 0);
  for (std::size_t col : basis) wanted[col] = 1;

  auto reset = [&] {
    tab_ = orig_tab_;
    beta_ = orig_beta_;
    std::fill(d_.begin(), d_.end(), 0.0);
    std::copy(cost_.begin(), cost_.end(), d_.begin());
    std::fill(where_.begin(), where_.end(), -1);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      where_[n_ + i] = static_cast<std::ptrdiff_t>(i);
    }
  };
  reset();
  for (std::size_t q : basis) {
    if (where_[q] >= 0) continue;  // a slack that never left
    std::size_t r = m_;
    double best = kPivotTol;
    for (std::size_t i = 0; i < m_; ++i) {
      if (wanted[head_[i]]) continue;
      const double mag = std::abs(at(i, q));
      if (mag > best) {
        best = mag;
        r = i;
      }
    }
    if (r == m_) {
      reset();
      break;
    }
    const std::size_t leaving = head_[r];
    eliminate(r, q);
    val_[leaving] = lo_[leaving];
  }
  for (std::size_t col : basis) {
    if (where_[col] < 0 && val_[col] < lo_[col]) val_[col] = lo_[col];
  }
  since_refactor_ = 0;
}

void DualSimplex::set_structural_bounds(std::span<const double> lower,
                                        std::span<const double> upper) {
  std::copy(lower.begin(), lower.end(), lo_.begin());
  std::copy(upper.begin(), upper.end(), up_.begin());
}

void DualSimplex::place_nonbasic() {
  for (std::size_t j = 0; j < cols_; ++j) {
    if (where_[j] >= 0) continue;
    double target;
    if (lo_[j] == up_[j]) {
      target = lo_[j];
    } else if (d_[j] > kDualTol) {
      target = up_[j];
    } else if (d_[j] < -kDualTol) {
      target = lo_[j];
    } else {
      target = (val_[j] == up_[j]) ? up_[j] : lo_[j];
    }
    val_[j] = target;
  }
}

void DualSimplex::recompute_basic_values() {
  xb_ = beta_;
  for (std::size_t j = 0; j < cols_; ++j) {
    if (where_[j] >= 0 || val_[j] == 0.0) continue;
    const double v = val_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = at(i, j);
      if (a != 0.0) xb_[i] -= a * v;
    }
  }
}

DualSimplex::Result DualSimplex::solve() {
  if (since_refactor_ > 2 * m_ + 50) refactor();
  place_nonbasic();
  recompute_basic_values();
  Result result = iterate();
  if (result != Result::Optimal && since_refactor_ > 0) {
    // Only trust a negative verdict computed on a fresh factorization.
    refactor();
    place_nonbasic();
    recompute_basic_values();
    result = iterate();
  }
  return result;
}

DualSimplex::Result DualSimplex::iterate() {
  const std::size_t bland_after = 20 * (m_ + cols_) + 1000;
  const std::size_t limit = 200 * (m_ + cols_) + 10000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter >= limit) return Result::IterationLimit;
    const bool bland = iter >= bland_after;

    // Leaving row: largest bound violation (lowest basic column under Bland).
    std::size_t r = m_;
    double worst = kPrimalTol;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t col = head_[i];
      const double v = xb_[i];
      const double infeas = std::max(lo_[col] - v, v - up_[col]);
      if (infeas <= kPrimalTol) continue;
      if (bland) {
        if (r == m_ || col < head_[r]) r = i;
      } else if (infeas > worst) {
        worst = infeas;
        r = i;
      }
    }
    if (r == m_) return Result::Optimal;

    const std::size_t leaving = head_[r];
    const bool below = xb_[r] < lo_[leaving];
    const double target = below ? lo_[leaving] : up_[leaving];

    // Dual ratio test over columns that can move x_r toward its bound.
    std::size_t q = cols_;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_mag = 0.0;
    const double* row = &tab_[r * cols_];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (where_[j] >= 0 || lo_[j] == up_[j]) continue;
      const double a = row[j];
      const double mag = std::abs(a);
      if (mag < kPivotTol) continue;
      const bool can_inc = val_[j] < up_[j];
      const bool can_dec = val_[j] > lo_[j];
      // x_r moves by -a per unit increase of x_j.
      const bool eligible = below ? ((a < 0 && can_inc) || (a > 0 && can_dec))
                                  : ((a > 0 && can_inc) || (a < 0 && can_dec));
      if (!eligible) continue;
      const double ratio = std::abs(d_[j]) / mag;
      const double tie = 1e-12 * (1.0 + best_ratio);
      if (ratio < best_ratio - tie) {
        q = j;
        best_ratio = ratio;
        best_mag = mag;
      } else if (ratio <= best_ratio + tie && !bland && mag > best_mag) {
        q = j;
        best_ratio = std::min(best_ratio, ratio);
        best_mag = mag;
      }
    }
    if (q == cols_) return Result::Infeasible;

    pivot(r, q, target);
    ++total_iterations_;
  }
}

void DualSimplex::pivot(std::size_t r, std::size_t q, double leaving_value) {
  const double arq = at(r, q);
  const double delta = (xb_[r] - leaving_value) / arq;
  for (std::size_t i = 0; i < m_; ++i) {
    const double a = at(i, q);
    if (a != 0.0) xb_[i] -= a * delta;
  }
  const double entering_value = val_[q] + delta;
  const std::size_t leaving = head_[r];
  eliminate(r, q);
  val_[leaving] = leaving_value;
  xb_[r] = entering_value;
  ++since_refactor_;
}

double DualSimplex::bound() const {
  double z = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    const double x = where_[j] >= 0 ? xb_[static_cast<std::size_t>(where_[j])] : val_[j];
    z += cost_[j] * x;
  }
  // c.x = z + sum_j d_j (x_j - xbar_j) over nonbasic j; charge any
  // positive contribution the box still allows.
  for (std::size_t j = 0; j < cols_; ++j) {
    if (where_[j] >= 0 || lo_[j] == up_[j]) continue;
    if (d_[j] > 0 && val_[j] < up_[j]) z += d_[j] * (up_[j] - val_[j]);
    if (d_[j] < 0 && val_[j] > lo_[j]) z += -d_[j] * (val_[j] - lo_[j]);
  }
  return z;
}

void DualSimplex::structural_values(std::vector<double>& out) const {
  out.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    out[j] = where_[j] >= 0 ? xb_[static_cast<std::size_t>(where_[j])] : val_[j];
  }
}

}  // namespace dfsopt::binprog::detail
