// Dense-tableau primal simplex for bounded variables.
//
// Every row gets a slack s_i with A_i x + s_i = b_i, where s_i >= 0 on "<="
// rows, s_i <= 0 on ">=" rows and s_i = 0 on equalities. Nonbasic variables
// rest on one of their bounds. Rows whose slack cannot absorb the starting
// residual get an artificial column and phase 1 drives those to zero.
//
// Pivoting follows Bland's rule (lowest index enters; among tied ratios the
// lowest-index basic variable leaves), so a solve is deterministic and does
// not cycle on the highly degenerate factor-revealing families. The final
// basis is refactored from the original data before x and the duals are
// reported, so tableau drift never leaks into the answer.

#ifndef VARLP_SIMPLEX_HPP
#define VARLP_SIMPLEX_HPP

#include "varlp/certificate.hpp"
#include "varlp/dense_lp.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <vector>

namespace varlp {

template <typename Scalar>
struct SolveOptions {
  long max_iterations = 0;           // 0 selects 50 * (rows + vars) + 1000
  Scalar feasibility_tol = Scalar(1e-9);
  Scalar pivot_tol = Scalar(1e-10);
  Scalar optimality_tol = Scalar(1e-11);
  Scalar certification_tol = Scalar(1e-8);
};

namespace detail {

enum class VarState { kBasic, kAtLower, kAtUpper };

template <typename Scalar>
class BoundedTableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  BoundedTableau(const DenseLp<Scalar>& lp, const SolveOptions<Scalar>& opts)
      : opts_(opts), m_(lp.n_rows()), n_(lp.n_vars()) {
    constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

    // Structural start: every variable at its finite bound closest to zero.
    std::vector<Scalar> lower, upper;
    std::vector<VarState> state;
    Vector x0(n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      lower.push_back(lp.var_lower(j));
      upper.push_back(lp.var_upper(j));
      const bool use_upper = std::isinf(lp.var_lower(j));
      state.push_back(use_upper ? VarState::kAtUpper : VarState::kAtLower);
      x0(j) = use_upper ? lp.var_upper(j) : lp.var_lower(j);
    }
    const Vector residual = lp.rhs - lp.rows * x0;

    // Slacks, then artificials where the slack cannot take the residual.
    std::vector<Eigen::Index> artificial_rows;
    std::vector<Scalar> artificial_sign;
    basis_.assign(m_, -1);
    std::vector<Scalar> basis_sign(m_, 1);
    for (Eigen::Index i = 0; i < m_; ++i) {
      Scalar lo = 0, hi = 0;
      if (lp.relations[i] == Relation::kLessEqual) hi = kInf;
      if (lp.relations[i] == Relation::kGreaterEqual) lo = -kInf;
      lower.push_back(lo);
      upper.push_back(hi);
      const Scalar r = residual(i);
      if (r >= lo && r <= hi) {
        state.push_back(VarState::kBasic);
        basis_[i] = n_ + i;
      } else {
        state.push_back(VarState::kAtLower);  // slack sits at 0, which is finite
        if (lp.relations[i] == Relation::kGreaterEqual) state.back() = VarState::kAtUpper;
        artificial_rows.push_back(i);
        artificial_sign.push_back(r > 0 ? Scalar(1) : Scalar(-1));
      }
    }
    first_artificial_ = n_ + m_;
    const Eigen::Index n_art = static_cast<Eigen::Index>(artificial_rows.size());
    for (Eigen::Index k = 0; k < n_art; ++k) {
      lower.push_back(0);
      upper.push_back(kInf);
      state.push_back(VarState::kBasic);
      basis_[artificial_rows[k]] = first_artificial_ + k;
      basis_sign[artificial_rows[k]] = artificial_sign[k];
    }
    cols_ = first_artificial_ + n_art;

    full_ = Matrix::Zero(m_, cols_);
    full_.leftCols(n_) = lp.rows;
    full_.middleCols(n_, m_) = Matrix::Identity(m_, m_);
    for (Eigen::Index k = 0; k < n_art; ++k)
      full_(artificial_rows[k], first_artificial_ + k) = artificial_sign[k];

    // Every basis column is +-e_i, so B^-1 is diagonal.
    tableau_ = full_;
    for (Eigen::Index i = 0; i < m_; ++i) tableau_.row(i) *= basis_sign[i];

    lower_ = Eigen::Map<Vector>(lower.data(), cols_);
    upper_ = Eigen::Map<Vector>(upper.data(), cols_);
    state_ = std::move(state);
    value_ = Vector::Zero(cols_);
    value_.head(n_) = x0;
    for (Eigen::Index i = 0; i < m_; ++i) value_(basis_[i]) = basis_sign[i] * residual(i);
    for (Eigen::Index j = n_; j < first_artificial_; ++j)
      if (state_[j] != VarState::kBasic) value_(j) = 0;
    rhs_ = lp.rhs;
  }

  bool has_artificials() const { return cols_ > first_artificial_; }

  void set_cost(const Vector& cost) {
    cost_ = cost;
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost_(basis_[i]);
    reduced_ = cost_.transpose() - cb.transpose() * tableau_;
  }

  Vector phase_one_cost() const {
    Vector c = Vector::Zero(cols_);
    c.tail(cols_ - first_artificial_).setOnes();
    return c;
  }

  Vector phase_two_cost(const Vector& structural) const {
    Vector c = Vector::Zero(cols_);
    c.head(n_) = structural;
    return c;
  }

  Scalar artificial_mass() const {
    Scalar s = 0;
    for (Eigen::Index j = first_artificial_; j < cols_; ++j) s += std::abs(value_(j));
    return s;
  }

  /// Fixes artificials at zero and pivots basic ones out where a
  /// non-artificial column can replace them.
  void retire_artificials() {
    for (Eigen::Index j = first_artificial_; j < cols_; ++j) upper_(j) = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (Eigen::Index j = 0; j < first_artificial_; ++j) {
        if (state_[j] != VarState::kBasic && std::abs(tableau_(i, j)) > opts_.pivot_tol * 1e3) {
          // Degenerate pivot: the artificial is at (or within tolerance of) zero.
          const Eigen::Index leaving = basis_[i];
          pivot(i, j);
          state_[leaving] = VarState::kAtLower;
          value_(leaving) = 0;
          break;
        }
      }
    }
  }

  enum class StepResult { kOptimal, kUnbounded, kMoved };

  StepResult step() {
    constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < cols_; ++j) {
      if (state_[j] == VarState::kBasic || upper_(j) == lower_(j)) continue;
      const Scalar d = reduced_(j);
      if ((state_[j] == VarState::kAtLower && d < -opts_.optimality_tol) ||
          (state_[j] == VarState::kAtUpper && d > opts_.optimality_tol)) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return StepResult::kOptimal;

    const Scalar dir = state_[entering] == VarState::kAtLower ? Scalar(1) : Scalar(-1);
    Scalar theta = upper_(entering) - lower_(entering);
    Eigen::Index leave_row = -1;
    Eigen::Index leave_var = entering;
    const Scalar tie = opts_.feasibility_tol * Scalar(1e-3);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Scalar alpha = dir * tableau_(i, entering);
      if (std::abs(alpha) <= opts_.pivot_tol) continue;
      const Eigen::Index b = basis_[i];
      Scalar limit = kInf;
      if (alpha > 0 && !std::isinf(lower_(b))) limit = (value_(b) - lower_(b)) / alpha;
      if (alpha < 0 && !std::isinf(upper_(b))) limit = (upper_(b) - value_(b)) / -alpha;
      if (std::isinf(limit)) continue;
      limit = std::max<Scalar>(limit, 0);
      if (limit < theta - tie || (limit <= theta + tie && b < leave_var)) {
        theta = limit;
        leave_row = i;
        leave_var = b;
      }
    }
    if (std::isinf(theta)) return StepResult::kUnbounded;

    for (Eigen::Index i = 0; i < m_; ++i)
      value_(basis_[i]) -= dir * theta * tableau_(i, entering);
    value_(entering) += dir * theta;

    if (leave_row < 0) {
      state_[entering] =
          state_[entering] == VarState::kAtLower ? VarState::kAtUpper : VarState::kAtLower;
      value_(entering) = state_[entering] == VarState::kAtLower ? lower_(entering) : upper_(entering);
      return StepResult::kMoved;
    }

    const Eigen::Index leaving = basis_[leave_row];
    const bool to_lower = dir * tableau_(leave_row, entering) > 0;
    pivot(leave_row, entering);
    state_[leaving] = to_lower ? VarState::kAtLower : VarState::kAtUpper;
    value_(leaving) = to_lower ? lower_(leaving) : upper_(leaving);
    return StepResult::kMoved;
  }

  /// Recomputes basic values and row multipliers (minimization sense) from
  /// the original columns of the current basis.
  void refactor(Vector& x, Vector& y) const {
    Matrix basis_matrix(m_, m_);
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      basis_matrix.col(i) = full_.col(basis_[i]);
      cb(i) = cost_(basis_[i]);
    }
    Vector nonbasic_activity = Vector::Zero(m_);
    for (Eigen::Index j = 0; j < cols_; ++j)
      if (state_[j] != VarState::kBasic && value_(j) != 0) nonbasic_activity += value_(j) * full_.col(j);

    Vector values = value_;
    if (m_ > 0) {
      const Eigen::PartialPivLU<Matrix> lu(basis_matrix);
      const Vector xb = lu.solve(rhs_ - nonbasic_activity);
      for (Eigen::Index i = 0; i < m_; ++i) values(basis_[i]) = xb(i);
      y = lu.transpose().solve(cb);
    } else {
      y = Vector::Zero(0);
    }
    x = values.head(n_);
  }

 private:
  void pivot(Eigen::Index r, Eigen::Index j) {
    const RowVector pivot_row = tableau_.row(r) / tableau_(r, j);
    Vector column = tableau_.col(j);
    column(r) = 0;
    tableau_.noalias() -= column * pivot_row;
    tableau_.row(r) = pivot_row;
    reduced_ -= reduced_(j) * pivot_row;
    reduced_(j) = 0;
    basis_[r] = j;
    state_[j] = VarState::kBasic;
  }

  SolveOptions<Scalar> opts_;
  Eigen::Index m_, n_, cols_ = 0, first_artificial_ = 0;
  Matrix full_;
  Matrix tableau_;
  Vector rhs_, lower_, upper_, value_, cost_;
  RowVector reduced_;
  std::vector<Eigen::Index> basis_;
  std::vector<VarState> state_;
};

}  // namespace detail

/// Solves `lp`. Throws std::invalid_argument when `lp` breaks its invariants
/// (non-finite data, shape mismatch, no variables). Running out of
/// iterations is reported through the status, never silently.
template <typename Scalar>
LpSolution<Scalar> solve(const DenseLp<Scalar>& lp, const SolveOptions<Scalar>& opts = {}) {
  using Vector = typename DenseLp<Scalar>::Vector;
  using Tableau = detail::BoundedTableau<Scalar>;
  lp.validate();

  const long cap = opts.max_iterations > 0
                       ? opts.max_iterations
                       : 50 * static_cast<long>(lp.n_rows() + lp.n_vars()) + 1000;
  const Vector min_cost = lp.sense == Sense::kMaximize ? Vector(-lp.objective) : lp.objective;

  Tableau tableau(lp, opts);
  LpSolution<Scalar> sol;

  auto run_phase = [&](long& iterations) -> typename Tableau::StepResult {
    while (iterations < cap) {
      const auto result = tableau.step();
      if (result != Tableau::StepResult::kMoved) return result;
      ++iterations;
    }
    return Tableau::StepResult::kMoved;
  };

  auto finish = [&](SolveStatus status) {
    Vector x, y;
    tableau.refactor(x, y);
    sol.status = status;
    sol.x = x;
    sol.objective_value = lp.objective.dot(x);
    sol.dual = lp.sense == Sense::kMaximize ? Vector(-y) : y;
    sol.max_primal_violation = check_feasibility(lp, x, opts.feasibility_tol).max_violation;
    if (status == SolveStatus::kOptimal) {
      const auto cert = certify(lp, sol, opts.certification_tol);
      sol.duality_gap = cert.gap;
    }
    return sol;
  };

  long iterations = 0;
  if (tableau.has_artificials()) {
    tableau.set_cost(tableau.phase_one_cost());
    const auto phase_one = run_phase(iterations);
    sol.iterations = iterations;
    if (phase_one == Tableau::StepResult::kMoved) return finish(SolveStatus::kIterationLimit);
    if (tableau.artificial_mass() > opts.feasibility_tol) return finish(SolveStatus::kInfeasible);
    tableau.retire_artificials();
  }
  tableau.set_cost(tableau.phase_two_cost(min_cost));
  const auto phase_two = run_phase(iterations);
  sol.iterations = iterations;
  switch (phase_two) {
    case Tableau::StepResult::kOptimal:
      return finish(SolveStatus::kOptimal);
    case Tableau::StepResult::kUnbounded:
      return finish(SolveStatus::kUnbounded);
    case Tableau::StepResult::kMoved:
      break;
  }
  return finish(SolveStatus::kIterationLimit);
}

}  // namespace varlp

#endif  // VARLP_SIMPLEX_HPP
