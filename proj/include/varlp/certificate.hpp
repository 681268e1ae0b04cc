// Optimality certificates from LP duality.
//
// For the minimization form  min c'x, A x (rel) b, l <= x <= u  the row
// multipliers y satisfy y_i >= 0 on ">=" rows, y_i <= 0 on "<=" rows and are
// free on equalities. Reduced costs d = c - A'y are split between the lower
// and upper bound multipliers. A maximization problem is certified through
// its negated objective; multipliers are reported in the caller's sense.

#ifndef VARLP_CERTIFICATE_HPP
#define VARLP_CERTIFICATE_HPP

#include "varlp/dense_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varlp {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "?";
}

template <typename Scalar>
struct LpSolution {
  using Vector = typename DenseLp<Scalar>::Vector;

  SolveStatus status = SolveStatus::kIterationLimit;
  Vector x;
  Scalar objective_value = 0;
  Vector dual;  // one multiplier per row, caller's sense
  Scalar max_primal_violation = 0;
  Scalar duality_gap = 0;
  long iterations = 0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

template <typename Scalar>
struct Certificate {
  Scalar primal_violation = 0;
  Scalar dual_violation = 0;
  Scalar complementary_slackness = 0;
  Scalar primal_objective = 0;
  Scalar dual_objective = 0;
  Scalar gap = 0;
  bool passed = false;
};

/// Checks (x, dual) of `sol` against `lp`. The gap criterion is relative,
/// |primal - dual| <= tol * (1 + |primal|); the other residuals are absolute.
template <typename Scalar>
Certificate<Scalar> certify(const DenseLp<Scalar>& lp, const LpSolution<Scalar>& sol, Scalar tol) {
  using Vector = typename DenseLp<Scalar>::Vector;
  if (sol.status != SolveStatus::kOptimal)
    throw std::invalid_argument("certificate refused: solution is not optimal");
  if (sol.x.size() != lp.n_vars() || sol.dual.size() != lp.n_rows())
    throw std::invalid_argument("certificate refused: solution shape differs from lp");

  const Scalar sign = lp.sense == Sense::kMaximize ? Scalar(-1) : Scalar(1);
  const Vector cost = sign * lp.objective;
  const Vector y = sign * sol.dual;
  const Vector activity = lp.rows * sol.x;
  const Vector reduced = cost - lp.rows.transpose() * y;

  Certificate<Scalar> cert;
  cert.primal_violation = check_feasibility(lp, sol.x, Scalar(0)).max_violation;

  Scalar dual_obj = lp.rhs.dot(y);
  for (Eigen::Index i = 0; i < lp.n_rows(); ++i) {
    Scalar wrong_sign = 0;
    if (lp.relations[i] == Relation::kLessEqual) wrong_sign = std::max<Scalar>(y(i), 0);
    if (lp.relations[i] == Relation::kGreaterEqual) wrong_sign = std::max<Scalar>(-y(i), 0);
    cert.dual_violation = std::max(cert.dual_violation, wrong_sign);
    cert.complementary_slackness = std::max(
        cert.complementary_slackness, std::abs(y(i)) * std::abs(activity(i) - lp.rhs(i)));
  }
  for (Eigen::Index j = 0; j < lp.n_vars(); ++j) {
    const Scalar d = reduced(j);
    if (d > 0) {
      if (std::isinf(lp.var_lower(j))) {
        cert.dual_violation = std::max(cert.dual_violation, d);
      } else {
        dual_obj += d * lp.var_lower(j);
        cert.complementary_slackness =
            std::max(cert.complementary_slackness, d * std::abs(sol.x(j) - lp.var_lower(j)));
      }
    } else if (d < 0) {
      if (std::isinf(lp.var_upper(j))) {
        cert.dual_violation = std::max(cert.dual_violation, -d);
      } else {
        dual_obj += d * lp.var_upper(j);
        cert.complementary_slackness =
            std::max(cert.complementary_slackness, -d * std::abs(lp.var_upper(j) - sol.x(j)));
      }
    }
  }

  cert.primal_objective = lp.objective.dot(sol.x);
  cert.dual_objective = sign * dual_obj;
  cert.gap = std::abs(cert.primal_objective - cert.dual_objective);
  cert.passed = cert.primal_violation <= tol && cert.dual_violation <= tol &&
                cert.complementary_slackness <= tol &&
                cert.gap <= tol * (1 + std::abs(cert.primal_objective));
  return cert;
}

}  // namespace varlp

#endif  // VARLP_CERTIFICATE_HPP
