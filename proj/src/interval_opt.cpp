#include "varlp/interval_opt.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace varlp {

namespace {

constexpr double kSeparationSlack = 1e-12;

// Maximizes a unimodal f on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    } else {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // The interval ends are candidates too: f may be monotone.
  double best = mid;
  for (double x : {lo, hi})
    if (f(x) > f(best)) best = x;
  return best;
}

}  // namespace

IntervalSequence::IntervalSequence(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty() || points_.size() % 2 != 0)
    throw std::invalid_argument("interval sequence needs an even, non-zero number of points");
  if (!(points_.front() > 0.0)) throw std::invalid_argument("interval sequence must start above 0");
  if (!(points_.back() <= 1.0)) throw std::invalid_argument("interval sequence must end at or below 1");
  for (std::size_t k = 0; k + 1 < points_.size(); ++k)
    if (!(points_[k] < points_[k + 1])) throw std::invalid_argument("interval sequence must be strictly increasing");
}

double objective_g(const IntervalSequence& s) {
  double prefix = 1.0;
  double total = 0.0;
  for (int l = 0; l < s.intervals(); ++l) {
    total += prefix * s.a(l) * std::log(s.b(l) / s.a(l));
    prefix *= s.a(l) / s.b(l);
  }
  return total;
}

IntervalProfile::IntervalProfile(IntervalSequence s) : seq_(std::move(s)) {
  double prefix = 1.0;
  for (int l = 0; l < seq_.intervals(); ++l) {
    prefix_.push_back(prefix);
    prefix *= seq_.a(l) / seq_.b(l);
  }
  prefix_.push_back(prefix);
}

double IntervalProfile::operator()(double t) const {
  if (t < seq_.a(0)) return 0.0;
  for (int l = 0; l < seq_.intervals(); ++l) {
    if (t <= seq_.b(l)) {
      if (t >= seq_.a(l)) return 1.0 - prefix_[l] * seq_.a(l) / t;
      return 1.0 - prefix_[l];  // flat gap before interval l
    }
  }
  return 1.0 - prefix_.back();
}

double IntervalProfile::derivative(double t) const {
  for (int l = 0; l < seq_.intervals(); ++l)
    if (t >= seq_.a(l) && t < seq_.b(l)) return prefix_[l] * seq_.a(l) / (t * t);
  return 0.0;
}

Eigen::VectorXd IntervalProfile::sample(const Eigen::VectorXd& grid) const {
  Eigen::VectorXd u(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) u(k) = (*this)(grid(k));
  return u;
}

IntervalProfile reconstruct_u(const IntervalSequence& s) { return IntervalProfile(s); }

SearchResult search_best(int intervals, double resolution, double min_separation) {
  if (intervals != 1 && intervals != 2) throw std::invalid_argument("search supports K = 1 or K = 2");
  if (!(resolution > 0.0) || resolution > 1e-2) throw std::invalid_argument("resolution must lie in (0, 1e-2]");
  if (!(min_separation >= resolution - kSeparationSlack))
    throw std::invalid_argument("min_separation must be >= resolution");

  std::vector<double> grid;
  const auto m = static_cast<long>(std::floor(1.0 / resolution + 1e-9));
  for (long k = 1; k <= m; ++k) grid.push_back(static_cast<double>(k) * resolution);
  if (grid.back() < 1.0 - kSeparationSlack) grid.push_back(1.0);
  grid.back() = std::min(grid.back(), 1.0);
  std::vector<double> logs(grid.size());
  std::transform(grid.begin(), grid.end(), logs.begin(), [](double x) { return std::log(x); });

  const auto n = static_cast<long>(grid.size());
  auto separated = [&](long i, long j) { return grid[j] - grid[i] >= min_separation - kSeparationSlack; };
  // First index after i that keeps the separation.
  std::vector<long> next(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (separated(i, j)) {
        next[i] = j;
        break;
      }

  SearchResult result;
  result.intervals = intervals;
  result.resolution = resolution;
  result.min_separation = min_separation;
  result.best_value = -1.0;
  std::vector<long> best_idx;

  if (intervals == 1) {
    for (long i = 0; i < n; ++i)
      for (long j = next[i]; j < n; ++j) {
        const double v = grid[i] * (logs[j] - logs[i]);
        ++result.grid_points_evaluated;
        if (v > result.best_value) {
          result.best_value = v;
          best_idx = {i, j};
        }
      }
  } else {
    for (long i = 0; i < n; ++i)
      for (long j = next[i]; j < n; ++j) {
        const double first = grid[i] * (logs[j] - logs[i]);
        const double carry = grid[i] / grid[j];
        for (long k = next[j]; k < n; ++k)
          for (long l = next[k]; l < n; ++l) {
            const double v = first + carry * grid[k] * (logs[l] - logs[k]);
            ++result.grid_points_evaluated;
            if (v > result.best_value) {
              result.best_value = v;
              best_idx = {i, j, k, l};
            }
          }
      }
  }
  if (best_idx.empty()) throw std::invalid_argument("no sequence fits the separation on this grid");
  for (long idx : best_idx) result.best_s.push_back(grid[idx]);
  result.grid_best_value = result.best_value;

  if (intervals == 1) {
    double a = result.best_s[0];
    double b = result.best_s[1];
    auto value = [](double a_, double b_) { return a_ * std::log(b_ / a_); };
    for (int round = 0; round < 200; ++round) {
      const double a_prev = a, b_prev = b;
      a = golden_section_max([&](double x) { return value(x, b); }, 1e-12, b - min_separation);
      b = golden_section_max([&](double x) { return value(a, x); }, a + min_separation, 1.0);
      if (std::abs(a - a_prev) < 1e-14 && std::abs(b - b_prev) < 1e-14) break;
    }
    if (value(a, b) > result.best_value) {
      result.best_s = {a, b};
      result.best_value = value(a, b);
    }
  }
  return result;
}

std::string to_json(const SearchResult& result) {
  nlohmann::json j;
  j["K"] = result.intervals;
  j["resolution"] = result.resolution;
  j["min_separation"] = result.min_separation;
  j["best_s"] = result.best_s;
  j["best_value"] = result.best_value;
  j["grid_best_value"] = result.grid_best_value;
  j["grid_points_evaluated"] = result.grid_points_evaluated;
  return j.dump();
}

}  // namespace varlp
