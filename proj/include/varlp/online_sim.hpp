// Online algorithms behind the LP families, run on concrete instances.
//
// Offline vertices ("bidders") have a uniform integer capacity b; online
// vertices ("queries") arrive in the stored order. Values are reported in
// budget units: one assignment earns 1/b of a bidder's unit budget.

#ifndef VARLP_ONLINE_SIM_HPP
#define VARLP_ONLINE_SIM_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace varlp {

struct SimInstance {
  int n_offline = 0;
  int capacity = 1;
  std::vector<std::vector<int>> arrivals;  // 0-based offline indices

  long n_online() const { return static_cast<long>(arrivals.size()); }
  /// Throws std::invalid_argument on out-of-range neighbours or capacity < 1.
  void validate() const;
};

/// Phase t = 1..n brings `capacity` queries adjacent to bidders t..n.
/// The offline optimum assigns phase t to bidder t and exhausts every budget.
SimInstance triangular_instance(int n, int capacity);

/// Complete bipartite n x n with unit capacity.
SimInstance complete_instance(int n);

/// A perfect b-matching (query q planted on bidder q / b) plus random extra
/// edges of probability `extra_edge_prob`, arrivals shuffled. The planted
/// matching exhausts every budget.
SimInstance planted_instance(int n, int capacity, std::uint64_t seed, double extra_edge_prob = 0.05);

/// Text format: "n_offline n_online b", then one line of 1-based neighbour
/// indices per arrival (an empty line is a query with no neighbours).
SimInstance read_instance(std::istream& in);
void write_instance(std::ostream& out, const SimInstance& instance);

/// Budget accounting of a finished BALANCE run with N slabs:
///   alpha[i-1], i = 1..N+1: bidders whose spent fraction rho lies in
///                           [(i-1)/N, i/N) (group N+1: rho = 1);
///   beta_j:                 money spent inside slab [(j-1)/N, j/N].
/// Money is kept in integer units of 1/(b N) so prefix sums are exact.
struct SlabStats {
  int slabs = 0;
  std::vector<long> alpha;              // size N + 1
  std::vector<std::int64_t> beta_units;  // size N
  std::int64_t unit_denominator = 1;    // b * N
  std::vector<double> rho;              // per bidder

  double beta(int j) const {  // 1-based slab
    return static_cast<double>(beta_units.at(j - 1)) / static_cast<double>(unit_denominator);
  }
};

SlabStats slab_stats(const std::vector<int>& used, int capacity, int slabs);

struct BalanceRun {
  long assignments = 0;
  double value = 0;  // assignments / b
  std::vector<int> used;
  SlabStats stats;
};

/// Each arrival goes to the neighbour with the most remaining capacity
/// (lowest index on ties).
BalanceRun run_balance(const SimInstance& instance, int slabs);

struct SlabAudit {
  bool passed = true;
  std::optional<int> first_violation;  // 1-based prefix p
};

/// Checks sum_{j<=p} beta_j >= sum_{i<=p} alpha_i for every p in [N]. Only
/// meaningful when the offline optimum exhausts every budget; throws
/// std::invalid_argument otherwise. With finite b the inequality is exact
/// when N divides b, because a single bid then never straddles two slabs.
SlabAudit slab_audit(const SlabStats& stats, bool opt_exhausts_budgets);

struct SimOptions {
  long trials = 100'000;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct SimReport {
  long trials = 0;
  double estimate = 0;
  double std_error = 0;
  std::uint64_t seed = 0;
};

std::string to_json(const SimReport& report);

/// Expected matching size of RANKING (capacity must be 1).
SimReport run_ranking(const SimInstance& instance, const SimOptions& options);

struct PolicyTable {
  int n = 0;
  std::vector<double> accept_prob;  // per position, 0-based storage of positions 1..n
  std::vector<bool> reachable;
};

/// Acceptance probabilities x_i i / (1 - sum_{l<i} x_l) of the policy that
/// realizes a feasible secretary LP vector. Rejects x violating the LP by
/// more than 1e-6.
PolicyTable secretary_policy_from_lp(const Eigen::VectorXd& x);

/// Probability that the policy stops on the overall best candidate. Only
/// best-so-far candidates are ever accepted.
SimReport run_secretary(const PolicyTable& policy, const SimOptions& options);

/// Success probability of "skip the first k, then take the first
/// best-so-far": 1/n for k = 0, (k/n) sum_{i=k+1}^{n} 1/(i-1) otherwise.
double threshold_policy_value(long n, long k);

/// Maximum number of assignments any offline algorithm can make
/// (max flow through bidder capacities).
long offline_max_assignments(const SimInstance& instance);

}  // namespace varlp

#endif  // VARLP_ONLINE_SIM_HPP
