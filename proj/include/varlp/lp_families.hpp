// The four parameterized LP families and their exact finite-n oracles.

#ifndef VARLP_LP_FAMILIES_HPP
#define VARLP_LP_FAMILIES_HPP

#include "varlp/dense_lp.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace varlp {

enum class FamilyKind { kToy, kBalance, kRanking, kSecretary };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);

struct FamilySpec {
  FamilyKind kind = FamilyKind::kToy;
  long size = 1;

  /// Parses "toy:8", "balance:64", "ranking:512", "secretary:100".
  static FamilySpec parse(std::string_view text);
  std::string str() const;
};

/// Largest size the dense simplex is asked to handle.
inline constexpr long kMaxSimplexSize = 2048;
/// Largest size accepted by the linear-time recurrence oracles.
inline constexpr long kMaxRecurrenceSize = 10'000'000;

/// min (1/n) sum x_i  s.t.  x_i + (1/n) sum_{l<i} x_l >= 1,  x_i >= x_{i+1},  x in [0,1]^n.
/// Rows 0..n-1 are the cumulative constraints, rows n..2n-2 the monotonicity ones.
DenseLp<double> build_toy(long n);

/// max sum x_i (1 - i/N)  s.t.  sum_{i<=p} x_i (1 + (p-i)/N) <= p/N,  x in [0,1]^N.
DenseLp<double> build_balance(long n);

/// min (1/n) sum x_i  s.t.  x_i + (1/n) sum_{j<=i} x_j >= 1,  x in [0,1]^n.
DenseLp<double> build_ranking(long n);

/// max sum x_i (i/n)  s.t.  i x_i + sum_{l<i} x_l <= 1,  x in [0,1]^n.
DenseLp<double> build_secretary(long n);

DenseLp<double> build_family(const FamilySpec& spec);

/// Ranking rows taken with equality, solved forward in i. Unique optimum.
Eigen::VectorXd tight_solution_ranking(long n);
/// Toy cumulative rows taken with equality: x_1 = 1, then forward.
Eigen::VectorXd tight_solution_toy(long n);

/// Objective of the tight solutions without materializing x (O(1) memory).
double tight_objective_ranking(long n);
double tight_objective_toy(long n);

/// Objective of `x` in the family's own sense and scaling.
double family_objective(FamilyKind kind, const Eigen::VectorXd& x);

/// Continuum value each family converges to: 1-1/e for toy and ranking,
/// 1/e for balance and secretary.
double family_limit(FamilyKind kind);

}  // namespace varlp

#endif  // VARLP_LP_FAMILIES_HPP
