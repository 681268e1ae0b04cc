#include "varlp/online_sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>

namespace varlp {

namespace {

// Trials are grouped into fixed blocks; block b always draws from the same
// substream of (seed, b), so the merged estimate does not depend on how many
// workers share the blocks.
constexpr long kTrialsPerBlock = 4096;

struct Moments {
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
};

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, long block) {
  const auto b = static_cast<std::uint64_t>(block);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

// make_trial() is called once per worker and returns a callable
// long(std::mt19937_64&) with its own scratch space.
template <typename MakeTrial>
SimReport run_sharded(const SimOptions& options, std::uint64_t stream, const MakeTrial& make_trial) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const long blocks = (options.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<Moments> per_block(blocks);
  std::atomic<long> next{0};

  auto worker = [&] {
    auto trial = make_trial();
    for (long block = next++; block < blocks; block = next++) {
      auto engine = block_engine(options.seed, stream, block);
      const long begin = block * kTrialsPerBlock;
      const long end = std::min(options.trials, begin + kTrialsPerBlock);
      Moments m;
      for (long t = begin; t < end; ++t) {
        const std::int64_t v = trial(engine);
        m.sum += v;
        m.sum_sq += v * v;
      }
      per_block[block] = m;
    }
  };

  const int workers = std::clamp<long>(options.workers, 1, blocks);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  long double sum = 0, sum_sq = 0;
  for (const Moments& m : per_block) {
    sum += static_cast<long double>(m.sum);
    sum_sq += static_cast<long double>(m.sum_sq);
  }
  const auto n = static_cast<long double>(options.trials);
  SimReport report;
  report.trials = options.trials;
  report.seed = options.seed;
  report.estimate = static_cast<double>(sum / n);
  if (options.trials > 1) {
    const long double var = std::max<long double>((sum_sq - sum * sum / n) / (n - 1), 0);
    report.std_error = static_cast<double>(std::sqrt(var / n));
  }
  return report;
}

constexpr std::uint64_t kRankingStream = 1;
constexpr std::uint64_t kSecretaryStream = 2;

}  // namespace

void SimInstance::validate() const {
  if (n_offline < 0) throw std::invalid_argument("n_offline must be >= 0");
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  for (const auto& nbrs : arrivals)
    for (int u : nbrs)
      if (u < 0 || u >= n_offline) throw std::invalid_argument("neighbour index out of range");
}

SimInstance triangular_instance(int n, int capacity) {
  if (n < 1 || capacity < 1) throw std::invalid_argument("triangular instance needs n, b >= 1");
  SimInstance inst;
  inst.n_offline = n;
  inst.capacity = capacity;
  for (int t = 0; t < n; ++t) {
    std::vector<int> nbrs(n - t);
    std::iota(nbrs.begin(), nbrs.end(), t);
    for (int c = 0; c < capacity; ++c) inst.arrivals.push_back(nbrs);
  }
  return inst;
}

SimInstance complete_instance(int n) {
  if (n < 1) throw std::invalid_argument("complete instance needs n >= 1");
  SimInstance inst;
  inst.n_offline = n;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  inst.arrivals.assign(n, all);
  return inst;
}

SimInstance planted_instance(int n, int capacity, std::uint64_t seed, double extra_edge_prob) {
  if (n < 1 || capacity < 1) throw std::invalid_argument("planted instance needs n, b >= 1");
  if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0)) throw std::invalid_argument("edge probability outside [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution extra(extra_edge_prob);
  SimInstance inst;
  inst.n_offline = n;
  inst.capacity = capacity;
  for (long q = 0; q < static_cast<long>(n) * capacity; ++q) {
    const int planted = static_cast<int>(q / capacity);
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u)
      if (u == planted || extra(rng)) nbrs.push_back(u);
    inst.arrivals.push_back(std::move(nbrs));
  }
  std::shuffle(inst.arrivals.begin(), inst.arrivals.end(), rng);
  return inst;
}

SlabStats slab_stats(const std::vector<int>& used, int capacity, int slabs) {
  if (slabs < 1) throw std::invalid_argument("slab count must be >= 1");
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  SlabStats stats;
  stats.slabs = slabs;
  stats.alpha.assign(slabs + 1, 0);
  stats.beta_units.assign(slabs, 0);
  stats.unit_denominator = static_cast<std::int64_t>(capacity) * slabs;
  for (int spent : used) {
    if (spent < 0 || spent > capacity) throw std::invalid_argument("spend outside [0, b]");
    // rho = spent / b; group floor(rho N) + 1, so boundary values move up.
    const std::int64_t scaled = static_cast<std::int64_t>(spent) * slabs;  // rho in units of 1/(bN), times b
    const auto group = static_cast<int>(std::min<std::int64_t>(scaled / capacity, slabs));
    ++stats.alpha[group];
    for (int j = 0; j < slabs; ++j) {
      // Money inside slab [j/N, (j+1)/N] in units of 1/(bN).
      const std::int64_t inside = std::clamp<std::int64_t>(scaled - static_cast<std::int64_t>(j) * capacity, 0, capacity);
      if (inside == 0) break;
      stats.beta_units[j] += inside;
    }
    stats.rho.push_back(static_cast<double>(spent) / capacity);
  }
  return stats;
}

BalanceRun run_balance(const SimInstance& instance, int slabs) {
  instance.validate();
  BalanceRun run;
  run.used.assign(instance.n_offline, 0);
  for (const auto& nbrs : instance.arrivals) {
    int pick = -1;
    for (int u : nbrs) {
      if (run.used[u] >= instance.capacity) continue;
      if (pick < 0 || run.used[u] < run.used[pick] || (run.used[u] == run.used[pick] && u < pick)) pick = u;
    }
    if (pick >= 0) {
      ++run.used[pick];
      ++run.assignments;
    }
  }
  run.value = static_cast<double>(run.assignments) / instance.capacity;
  run.stats = slab_stats(run.used, instance.capacity, slabs);
  return run;
}

SlabAudit slab_audit(const SlabStats& stats, bool opt_exhausts_budgets) {
  if (!opt_exhausts_budgets) throw std::invalid_argument("slab audit refused: offline optimum must exhaust every budget");
  if (static_cast<int>(stats.alpha.size()) != stats.slabs + 1 || static_cast<int>(stats.beta_units.size()) != stats.slabs)
    throw std::invalid_argument("slab stats have inconsistent sizes");
  SlabAudit audit;
  std::int64_t beta_prefix = 0;  // units of 1/(bN)
  std::int64_t alpha_prefix = 0;
  for (int p = 1; p <= stats.slabs; ++p) {
    beta_prefix += stats.beta_units[p - 1];
    alpha_prefix += stats.alpha[p - 1];
    if (beta_prefix < alpha_prefix * stats.unit_denominator) {
      audit.passed = false;
      audit.first_violation = p;
      break;
    }
  }
  return audit;
}

std::string to_json(const SimReport& report) {
  nlohmann::json j;
  j["trials"] = report.trials;
  j["estimate"] = report.estimate;
  j["std_error"] = report.std_error;
  j["seed"] = report.seed;
  return j.dump();
}

SimReport run_ranking(const SimInstance& instance, const SimOptions& options) {
  instance.validate();
  if (instance.capacity != 1) throw std::invalid_argument("RANKING needs unit capacity");
  auto make_trial = [&instance] {
    return [&instance, rank = std::vector<int>(instance.n_offline),
            matched = std::vector<char>(instance.n_offline)](std::mt19937_64& rng) mutable -> std::int64_t {
      std::iota(rank.begin(), rank.end(), 0);
      std::shuffle(rank.begin(), rank.end(), rng);
      std::fill(matched.begin(), matched.end(), 0);
      std::int64_t size = 0;
      for (const auto& nbrs : instance.arrivals) {
        int pick = -1;
        for (int u : nbrs)
          if (!matched[u] && (pick < 0 || rank[u] < rank[pick])) pick = u;
        if (pick >= 0) {
          matched[pick] = 1;
          ++size;
        }
      }
      return size;
    };
  };
  return run_sharded(options, kRankingStream, make_trial);
}

PolicyTable secretary_policy_from_lp(const Eigen::VectorXd& x) {
  constexpr double kFeasibilityTol = 1e-6;
  constexpr double kReachTol = 1e-12;
  const long n = x.size();
  if (n < 1) throw std::invalid_argument("policy needs at least one position");
  PolicyTable policy;
  policy.n = static_cast<int>(n);
  long double prefix = 0;
  for (long i = 1; i <= n; ++i) {
    const double xi = x(i - 1);
    if (xi < -kFeasibilityTol || xi > 1.0 + kFeasibilityTol)
      throw std::invalid_argument("x violates its bounds at position " + std::to_string(i));
    const double remaining = static_cast<double>(1.0L - prefix);
    if (static_cast<double>(i) * xi > remaining + kFeasibilityTol)
      throw std::invalid_argument("x violates the secretary constraint at position " + std::to_string(i));
    if (remaining <= kReachTol) {
      policy.accept_prob.push_back(0.0);
      policy.reachable.push_back(false);
    } else {
      const double p = static_cast<double>(i) * xi / remaining;
      policy.accept_prob.push_back(std::clamp(p, 0.0, 1.0));
      policy.reachable.push_back(true);
    }
    prefix += xi;
  }
  return policy;
}

SimReport run_secretary(const PolicyTable& policy, const SimOptions& options) {
  if (policy.n < 1 || static_cast<int>(policy.accept_prob.size()) != policy.n ||
      static_cast<int>(policy.reachable.size()) != policy.n)
    throw std::invalid_argument("malformed policy table");
  auto make_trial = [&policy] {
    return [&policy, ranks = std::vector<int>(policy.n)](std::mt19937_64& rng) mutable -> std::int64_t {
      std::iota(ranks.begin(), ranks.end(), 0);  // rank 0 is the overall best
      std::shuffle(ranks.begin(), ranks.end(), rng);
      int best_so_far = std::numeric_limits<int>::max();
      for (int i = 0; i < policy.n; ++i) {
        if (ranks[i] >= best_so_far) continue;
        best_so_far = ranks[i];
        if (!policy.reachable[i]) continue;
        const double p = policy.accept_prob[i];
        if (p <= 0.0) continue;
        if (p >= 1.0 || std::generate_canonical<double, 53>(rng) < p) return ranks[i] == 0 ? 1 : 0;
      }
      return 0;
    };
  };
  return run_sharded(options, kSecretaryStream, make_trial);
}

double threshold_policy_value(long n, long k) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (k < 0 || k >= n) throw std::invalid_argument("threshold k must satisfy 0 <= k < n");
  if (k == 0) return 1.0 / static_cast<double>(n);
  long double harmonic = 0;
  for (long i = n; i >= k + 1; --i) harmonic += 1.0L / static_cast<long double>(i - 1);
  return static_cast<double>(static_cast<long double>(k) / static_cast<long double>(n) * harmonic);
}

long offline_max_assignments(const SimInstance& instance) {
  instance.validate();
  // Dinic on source -> bidder (cap b) -> query (cap 1) -> sink (cap 1).
  struct Edge {
    int to;
    int cap;
  };
  const int bidders = instance.n_offline;
  const int queries = static_cast<int>(instance.arrivals.size());
  const int source = bidders + queries;
  const int sink = source + 1;
  const int nodes = sink + 1;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(nodes);
  auto add_edge = [&](int from, int to, int cap) {
    adj[from].push_back(static_cast<int>(edges.size()));
    edges.push_back({to, cap});
    adj[to].push_back(static_cast<int>(edges.size()));
    edges.push_back({from, 0});
  };
  for (int u = 0; u < bidders; ++u) add_edge(source, u, instance.capacity);
  for (int q = 0; q < queries; ++q) {
    for (int u : instance.arrivals[q]) add_edge(u, bidders + q, 1);
    add_edge(bidders + q, sink, 1);
  }

  std::vector<int> level(nodes), cursor(nodes);
  auto bfs = [&] {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> frontier;
    level[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      for (int id : adj[v])
        if (edges[id].cap > 0 && level[edges[id].to] < 0) {
          level[edges[id].to] = level[v] + 1;
          frontier.push(edges[id].to);
        }
    }
    return level[sink] >= 0;
  };
  auto dfs = [&](auto&& self, int v, int pushed) -> int {
    if (v == sink) return pushed;
    for (int& i = cursor[v]; i < static_cast<int>(adj[v].size()); ++i) {
      const int id = adj[v][i];
      const int to = edges[id].to;
      if (edges[id].cap <= 0 || level[to] != level[v] + 1) continue;
      const int got = self(self, to, std::min(pushed, edges[id].cap));
      if (got > 0) {
        edges[id].cap -= got;
        edges[id ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  };

  long flow = 0;
  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    while (int pushed = dfs(dfs, source, std::numeric_limits<int>::max())) flow += pushed;
  }
  return flow;
}

}  // namespace varlp
