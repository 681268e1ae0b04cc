#include "varlp/studies.hpp"

#include "varlp/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <thread>

namespace varlp {

namespace {

bool has_recurrence(FamilyKind kind) { return kind == FamilyKind::kToy || kind == FamilyKind::kRanking; }

double recurrence_value(FamilyKind kind, long n) {
  return kind == FamilyKind::kToy ? tight_objective_toy(n) : tight_objective_ranking(n);
}

SweepRow sweep_one(FamilyKind kind, long n, const SweepOptions& options) {
  using clock = std::chrono::steady_clock;
  SweepRow row;
  row.n = n;
  const auto start = clock::now();
  if (n > kMaxSimplexSize) {
    row.value = recurrence_value(kind, n);
    row.from_recurrence = true;
  } else {
    const auto lp = build_family({kind, n});
    const auto sol = solve(lp);
    row.status = sol.status;
    if (!sol.optimal())
      throw SweepError(n, std::string(to_string(kind)) + ":" + std::to_string(n) + " ended " +
                              std::string(to_string(sol.status)));
    row.value = sol.objective_value;
    row.relative_gap = sol.duality_gap / (1.0 + std::abs(sol.objective_value));
    if (has_recurrence(kind)) {
      const double oracle = recurrence_value(kind, n);
      if (std::abs(oracle - row.value) > options.cross_check_tol)
        throw SweepError(n, std::string(to_string(kind)) + ":" + std::to_string(n) +
                                " simplex disagrees with the recurrence");
    }
  }
  row.ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return row;
}

}  // namespace

SweepTable sweep_family(FamilyKind kind, std::vector<long> sizes, const SweepOptions& options) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (long n : sizes) {
    if (n < 1) throw std::invalid_argument("sweep sizes must be positive");
    const long cap = has_recurrence(kind) ? kMaxRecurrenceSize : kMaxSimplexSize;
    if (n > cap) throw std::invalid_argument("size " + std::to_string(n) + " exceeds the family cap " + std::to_string(cap));
  }

  SweepTable table;
  table.family = kind;
  table.limit_target = family_limit(kind);
  table.rows.resize(sizes.size());

  // Largest sizes first so the slow solves start early; rows stay in n order.
  std::atomic<long> next{0};
  std::exception_ptr failure;
  long failed_size = 0;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (long k = next++; k < static_cast<long>(sizes.size()); k = next++) {
      const long idx = static_cast<long>(sizes.size()) - 1 - k;
      try {
        table.rows[idx] = sweep_one(kind, sizes[idx], options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        // Report the smallest failing size, whatever the completion order.
        if (!failure || sizes[idx] < failed_size) {
          failure = std::current_exception();
          failed_size = sizes[idx];
        }
      }
    }
  };
  const int workers = std::clamp<int>(options.workers, 1, std::max<int>(1, static_cast<int>(sizes.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return table;
}

LimitEstimate limit_estimate(SweepTable& table) {
  const auto total = static_cast<long>(table.rows.size());
  if (total < 3) throw std::invalid_argument("limit estimate needs at least 3 rows");
  const long used = std::max<long>(3, (total + 1) / 2);
  const long first = total - used;

  Eigen::MatrixXd design(used, 2);
  Eigen::VectorXd values(used);
  for (long k = 0; k < used; ++k) {
    const SweepRow& row = table.rows[first + k];
    design(k, 0) = 1.0;
    design(k, 1) = 1.0 / static_cast<double>(row.n);
    values(k) = row.value;
  }
  const Eigen::Vector2d fit = design.colPivHouseholderQr().solve(values);

  LimitEstimate est;
  est.limit = fit(0);
  est.constant = fit(1);
  est.error_bar = (design * fit - values).cwiseAbs().maxCoeff();
  est.target_error = std::abs(est.limit - table.limit_target);
  est.rows_used = static_cast<int>(used);
  table.extrapolated_limit = est.limit;
  table.fit_constant = est.constant;
  return est;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "family,n,value,status,ms\n";
  const auto precision = out.precision();
  for (const SweepRow& row : table.rows) {
    out << to_string(table.family) << ',' << row.n << ',' << std::setprecision(17) << row.value << ','
        << to_string(row.status) << ',' << std::setprecision(6) << row.ms << '\n';
  }
  out.precision(precision);
}

}  // namespace varlp
