// Convergence sweeps over the LP families and limit extrapolation.

#ifndef VARLP_STUDIES_HPP
#define VARLP_STUDIES_HPP

#include "varlp/certificate.hpp"
#include "varlp/lp_families.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace varlp {

struct SweepRow {
  long n = 0;
  double value = 0;
  SolveStatus status = SolveStatus::kOptimal;
  double ms = 0;
  bool from_recurrence = false;
  /// Relative duality gap of the simplex solve (0 for recurrence rows).
  double relative_gap = 0;
};

struct SweepTable {
  FamilyKind family = FamilyKind::kToy;
  std::vector<SweepRow> rows;  // ascending n
  double limit_target = 0;
  double extrapolated_limit = 0;
  double fit_constant = 0;  // C in value(n) ~ L + C / n
};

struct SweepOptions {
  int workers = 1;
  /// Simplex and recurrence must agree this closely inside the simplex cap.
  double cross_check_tol = 1e-9;
};

/// Thrown when a size fails to solve to optimality (or fails its cross-check).
class SweepError : public std::runtime_error {
 public:
  SweepError(long n, const std::string& what) : std::runtime_error(what), size_(n) {}
  long size() const { return size_; }

 private:
  long size_;
};

/// One solve per size. Toy and ranking switch to their recurrences above
/// kMaxSimplexSize; below it the recurrence is still evaluated as a check.
SweepTable sweep_family(FamilyKind kind, std::vector<long> sizes, const SweepOptions& options = {});

struct LimitEstimate {
  double limit = 0;
  double constant = 0;
  double error_bar = 0;     // max residual of the fit
  double target_error = 0;  // |limit - limit_target|
  int rows_used = 0;
};

/// Least-squares fit of value(n) = L + C / n over the largest half of the
/// rows (at least three). Stores L and C back into the table.
LimitEstimate limit_estimate(SweepTable& table);

/// Columns: family,n,value,status,ms
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace varlp

#endif  // VARLP_STUDIES_HPP
