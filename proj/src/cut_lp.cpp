#include "cut_lp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jamesgeo::detail {

namespace {
constexpr double kReducedCostTol = 1e-12;
constexpr double kPivotTol = 1e-9;
}  // namespace

CutLp::CutLp(std::vector<double> rhs, double box_cost) : rhs_(std::move(rhs)) {
  const std::size_t n = rhs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> plus(n, 0.0), minus(n, 0.0);
    plus[i] = 1.0;
    minus[i] = -1.0;
    cols_.push_back(std::move(plus));
    costs_.push_back(box_cost);
    cols_.push_back(std::move(minus));
    costs_.push_back(box_cost);
    basis_.push_back(rhs_[i] >= 0.0 ? 2 * i : 2 * i + 1);
  }
  refactor();
}

void CutLp::add_column(std::vector<double> column, double cost) {
  if (column.size() != rhs_.size()) throw std::invalid_argument("cut column has wrong dimension");
  cols_.push_back(std::move(column));
  costs_.push_back(cost);
}

bool CutLp::refactor() {
  const std::size_t n = rhs_.size();
  Eigen::MatrixXd b(n, n);
  Eigen::VectorXd cb(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) b(i, k) = cols_[basis_[k]][i];
    cb(k) = costs_[basis_[k]];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  lu.setThreshold(1e-10);
  if (lu.rank() < static_cast<Eigen::Index>(n)) return false;
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), n);
  Eigen::VectorXd xb = lu.solve(rhs);
  Eigen::VectorXd y = b.transpose().fullPivLu().solve(cb);
  if (!xb.allFinite() || !y.allFinite()) return false;
  basic_values_.assign(xb.data(), xb.data() + n);
  y_.assign(y.data(), y.data() + n);
  objective_ = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (basic_values_[k] < 0.0) basic_values_[k] = 0.0;
    objective_ += costs_[basis_[k]] * basic_values_[k];
  }
  return true;
}

void CutLp::solve() {
  const std::size_t n = rhs_.size();
  if (n == 0) return;
  const std::size_t max_pivots = 50 * (cols_.size() + n) + 100;
  std::size_t stalled = 0;
  double last_objective = objective_;
  std::vector<char> in_basis;
  std::vector<char> rejected(cols_.size(), 0);
  for (std::size_t pivot = 0; pivot < max_pivots; ++pivot) {
    in_basis.assign(cols_.size(), 0);
    for (auto j : basis_) in_basis[j] = 1;
    const bool bland = stalled > 20;
    std::size_t entering = cols_.size();
    double most_negative = 0.0;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (in_basis[j] || rejected[j]) continue;
      double r = costs_[j];
      for (std::size_t i = 0; i < n; ++i) r -= cols_[j][i] * y_[i];
      if (r < -kReducedCostTol * std::max(1.0, std::fabs(costs_[j]))) {
        if (bland) {
          entering = j;
          break;
        }
        if (r < most_negative) {
          most_negative = r;
          entering = j;
        }
      }
    }
    if (entering == cols_.size()) return;

    Eigen::MatrixXd b(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) b(i, k) = cols_[basis_[k]][i];
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(cols_[entering].data(), n);
    Eigen::VectorXd d = Eigen::PartialPivLU<Eigen::MatrixXd>(b).solve(a);
    const double pivot_floor = kPivotTol * std::max(1.0, d.cwiseAbs().maxCoeff());
    std::size_t leaving = n;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (d(k) > pivot_floor) {
        const double ratio = basic_values_[k] / d(k);
        if (ratio < best_ratio - 1e-15 ||
            (std::fabs(ratio - best_ratio) <= 1e-15 && leaving < n &&
             basis_[k] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = k;
        }
      }
    }
    // Costs are positive on the box columns, so the objective is bounded
    // below; an unbounded ray can only come from roundoff.
    if (leaving == n) return;
    const std::size_t previous = basis_[leaving];
    basis_[leaving] = entering;
    if (!refactor()) {
      basis_[leaving] = previous;
      refactor();
      rejected[entering] = 1;
      continue;
    }
    if (objective_ < last_objective - 1e-14 * std::max(1.0, std::fabs(last_objective))) {
      stalled = 0;
    } else {
      ++stalled;
    }
    last_objective = objective_;
  }
}

std::vector<double> CutLp::weights() const {
  std::vector<double> w(cols_.size(), 0.0);
  for (std::size_t k = 0; k < basis_.size(); ++k) w[basis_[k]] += basic_values_[k];
  return w;
}

std::vector<double> CutLp::residual() const {
  std::vector<double> r = rhs_;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= basic_values_[k] * cols_[basis_[k]][i];
  }
  return r;
}

}  // namespace jamesgeo::detail
