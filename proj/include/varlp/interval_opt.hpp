// Interval-sequence analysis of the secretary continuum program.
//
// A candidate u that alternates between flat pieces and pieces where
// u + u' t = 1 is described by s = (a1, b1, ..., aK, bK). Its objective
// (integral of u' t) has the closed form
//
//   g(s) = sum_l  prod_{i<l} (a_i / b_i) * a_l * ln(b_l / a_l).

#ifndef VARLP_INTERVAL_OPT_HPP
#define VARLP_INTERVAL_OPT_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace varlp {

class IntervalSequence {
 public:
  /// Throws std::invalid_argument unless 0 < a1 < b1 < ... < aK < bK <= 1.
  explicit IntervalSequence(std::vector<double> points);

  int intervals() const { return static_cast<int>(points_.size() / 2); }
  double a(int l) const { return points_[2 * l]; }
  double b(int l) const { return points_[2 * l + 1]; }
  const std::vector<double>& points() const { return points_; }

 private:
  std::vector<double> points_;
};

double objective_g(const IntervalSequence& s);

/// u_s(t): 0 before a1, 1 - P_l a_l / t on [a_l, b_l] with
/// P_l = prod_{i<l} a_i / b_i, constant in between and after bK.
class IntervalProfile {
 public:
  explicit IntervalProfile(IntervalSequence s);

  double operator()(double t) const;
  double derivative(double t) const;  // one-sided from the right at breakpoints
  std::vector<double> breakpoints() const { return seq_.points(); }
  const IntervalSequence& sequence() const { return seq_; }

  /// Values on a grid, suitable for multiplier_check.
  Eigen::VectorXd sample(const Eigen::VectorXd& grid) const;

 private:
  IntervalSequence seq_;
  std::vector<double> prefix_;  // P_l
};

IntervalProfile reconstruct_u(const IntervalSequence& s);

struct SearchResult {
  int intervals = 0;
  double resolution = 0;
  double min_separation = 0;
  std::vector<double> best_s;
  double best_value = 0;
  std::int64_t grid_points_evaluated = 0;
  /// Best value over the raw grid, before any refinement.
  double grid_best_value = 0;
};

/// Exhaustive search over sequences whose points lie on the grid
/// {resolution, 2 resolution, ..., 1} with consecutive gaps >= min_separation,
/// followed (K = 1) by coordinate ascent that keeps the same separation.
/// Ties go to the lexicographically smallest sequence.
SearchResult search_best(int intervals, double resolution, double min_separation);

std::string to_json(const SearchResult& result);

}  // namespace varlp

#endif  // VARLP_INTERVAL_OPT_HPP
