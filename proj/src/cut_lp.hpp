#pragma once

// Small dense LP used to certify support-function bounds:
//
//   minimize  Σ_j cost_j c_j   subject to   Σ_j c_j a_j = b,  c >= 0.
//
// Each column a_j is a cut normal with cost_j bounding its dual norm, so any
// feasible c certifies an upper bound and the simplex multipliers y are the
// maximizer of <b, y> over the polyhedral outer approximation
// { y : <a_j, y> <= cost_j }. The first 2n columns are ±e_i, which makes the
// all-slack basis feasible from the start.

#include <cstddef>
#include <vector>

namespace jamesgeo::detail {

class CutLp {
 public:
  /// rhs has dimension n; box_cost is the cost of the ±e_i columns.
  CutLp(std::vector<double> rhs, double box_cost);

  void add_column(std::vector<double> column, double cost);

  /// Runs primal simplex from the current basis to optimality.
  void solve();

  std::size_t dimension() const noexcept { return rhs_.size(); }
  std::size_t columns() const noexcept { return cols_.size(); }

  /// Current LP objective.
  double objective() const noexcept { return objective_; }

  /// Simplex multipliers y (solve B^T y = cost_B).
  const std::vector<double>& multipliers() const noexcept { return y_; }

  /// Nonnegative weights for every column (zero when nonbasic).
  std::vector<double> weights() const;

  /// b - Σ c_j a_j with the weights above.
  std::vector<double> residual() const;

  const std::vector<double>& column(std::size_t j) const { return cols_[j]; }
  double cost(std::size_t j) const { return costs_[j]; }

 private:
  bool refactor();  // false when the basis is singular

  std::vector<double> rhs_;
  std::vector<std::vector<double>> cols_;
  std::vector<double> costs_;
  std::vector<std::size_t> basis_;
  std::vector<double> basic_values_;
  std::vector<double> y_;
  double objective_ = 0.0;
};

}  // namespace jamesgeo::detail
