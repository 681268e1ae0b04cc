// Dense linear programs in explicit row form.
//
// A DenseLp stores every constraint row as a dense coefficient vector. The
// families studied in this library are lower-triangular and dense, so there is
// nothing to gain from a sparse layout at the sizes we solve (n <= 2048).

#ifndef VARLP_DENSE_LP_HPP
#define VARLP_DENSE_LP_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace varlp {

enum class Sense { kMinimize, kMaximize };

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

enum class FamilyTag { kToy, kBalance, kRanking, kSecretary, kCustom };

inline std::string_view to_string(Relation rel) {
  switch (rel) {
    case Relation::kLessEqual:
      return "<=";
    case Relation::kGreaterEqual:
      return ">=";
    case Relation::kEqual:
      return "=";
  }
  return "?";
}

inline std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::kToy:
      return "toy";
    case FamilyTag::kBalance:
      return "balance";
    case FamilyTag::kRanking:
      return "ranking";
    case FamilyTag::kSecretary:
      return "secretary";
    case FamilyTag::kCustom:
      return "custom";
  }
  return "?";
}

/// Linear program
///
///   min/max  objective' x
///   s.t.     rows(i, :) x  (relations[i])  rhs(i)
///            var_lower <= x <= var_upper
///
/// Coefficients and right-hand sides must be finite. Bounds may be infinite
/// as long as every variable keeps at least one finite bound.
template <typename Scalar>
struct DenseLp {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Sense sense = Sense::kMinimize;
  Vector objective;
  Matrix rows;
  std::vector<Relation> relations;
  Vector rhs;
  Vector var_lower;
  Vector var_upper;
  std::optional<FamilyTag> family_tag;

  Eigen::Index n_vars() const { return objective.size(); }
  Eigen::Index n_rows() const { return rows.rows(); }

  /// Empty LP with n variables bounded to [0, 1] and no rows.
  static DenseLp unit_box(Eigen::Index n, Sense sense) {
    DenseLp lp;
    lp.sense = sense;
    lp.objective = Vector::Zero(n);
    lp.rows = Matrix::Zero(0, n);
    lp.rhs = Vector::Zero(0);
    lp.var_lower = Vector::Zero(n);
    lp.var_upper = Vector::Ones(n);
    return lp;
  }

  /// Throws std::invalid_argument describing the first broken invariant.
  void validate() const {
    const Eigen::Index n = n_vars();
    if (n < 1) throw std::invalid_argument("lp has no variables");
    if (rows.cols() != n) throw std::invalid_argument("row length differs from n_vars");
    if (static_cast<Eigen::Index>(relations.size()) != rows.rows() || rhs.size() != rows.rows())
      throw std::invalid_argument("relations/rhs length differs from row count");
    if (var_lower.size() != n || var_upper.size() != n)
      throw std::invalid_argument("bound vectors must have length n_vars");
    if (!objective.allFinite()) throw std::invalid_argument("non-finite objective coefficient");
    if (!rows.allFinite()) throw std::invalid_argument("non-finite constraint coefficient");
    if (!rhs.allFinite()) throw std::invalid_argument("non-finite right-hand side");
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar lo = var_lower(j);
      const Scalar hi = var_upper(j);
      if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("NaN variable bound");
      if (lo > hi) throw std::invalid_argument("var_lower exceeds var_upper");
      if (std::isinf(lo) && std::isinf(hi))
        throw std::invalid_argument("free variables are not supported");
      if (lo == std::numeric_limits<Scalar>::infinity() ||
          hi == -std::numeric_limits<Scalar>::infinity())
        throw std::invalid_argument("bound at the wrong infinity");
    }
  }

  Scalar evaluate(const Vector& x) const { return objective.dot(x); }
};

template <typename Scalar>
struct FeasibilityReport {
  Scalar max_violation = 0;
  Scalar max_row_violation = 0;
  Scalar max_bound_violation = 0;
  std::optional<Eigen::Index> worst_row;       // 0-based
  std::optional<Eigen::Index> worst_variable;  // 0-based
  Eigen::Index violated_rows = 0;              // residual > tol
  Eigen::Index violated_bounds = 0;

  bool feasible() const { return violated_rows == 0 && violated_bounds == 0; }
};

/// Amount by which `activity` misses `rel rhs`; 0 when satisfied.
template <typename Scalar>
Scalar relation_residual(Relation rel, Scalar activity, Scalar rhs) {
  switch (rel) {
    case Relation::kLessEqual:
      return std::max<Scalar>(activity - rhs, 0);
    case Relation::kGreaterEqual:
      return std::max<Scalar>(rhs - activity, 0);
    case Relation::kEqual:
      return std::abs(activity - rhs);
  }
  return 0;
}

template <typename Scalar>
FeasibilityReport<Scalar> check_feasibility(const DenseLp<Scalar>& lp,
                                            const typename DenseLp<Scalar>::Vector& x,
                                            Scalar tol) {
  if (x.size() != lp.n_vars()) throw std::invalid_argument("x length differs from n_vars");
  FeasibilityReport<Scalar> report;
  const typename DenseLp<Scalar>::Vector activity = lp.rows * x;
  for (Eigen::Index i = 0; i < lp.n_rows(); ++i) {
    const Scalar r = relation_residual(lp.relations[i], activity(i), lp.rhs(i));
    if (r > tol) ++report.violated_rows;
    if (r > report.max_row_violation) {
      report.max_row_violation = r;
      report.worst_row = i;
    }
  }
  for (Eigen::Index j = 0; j < lp.n_vars(); ++j) {
    const Scalar r = std::max<Scalar>({lp.var_lower(j) - x(j), x(j) - lp.var_upper(j), 0});
    if (r > tol) ++report.violated_bounds;
    if (r > report.max_bound_violation) {
      report.max_bound_violation = r;
      report.worst_variable = j;
    }
  }
  report.max_violation = std::max(report.max_row_violation, report.max_bound_violation);
  return report;
}

}  // namespace varlp

#endif  // VARLP_DENSE_LP_HPP
