#include "varlp/lp_families.hpp"
#include "varlp/online_sim.hpp"
#include "varlp/simplex.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace varlp;

namespace {

SimInstance single_edge() {
  SimInstance inst;
  inst.n_offline = 1;
  inst.arrivals = {{0}};
  return inst;
}

// Brute force over all assignments of arrivals (or none) for tiny instances.
long brute_force_opt(const SimInstance& inst) {
  std::vector<int> load(inst.n_offline, 0);
  auto rec = [&](auto&& self, std::size_t q) -> long {
    if (q == inst.arrivals.size()) return 0;
    long best = self(self, q + 1);
    for (int u : inst.arrivals[q]) {
      if (load[u] == inst.capacity) continue;
      ++load[u];
      best = std::max(best, 1 + self(self, q + 1));
      --load[u];
    }
    return best;
  };
  return rec(rec, 0);
}

SimInstance random_instance(std::mt19937_64& rng, int n, int capacity, int arrivals, double p) {
  std::bernoulli_distribution edge(p);
  SimInstance inst;
  inst.n_offline = n;
  inst.capacity = capacity;
  for (int q = 0; q < arrivals; ++q) {
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u)
      if (edge(rng)) nbrs.push_back(u);
    inst.arrivals.push_back(nbrs);
  }
  return inst;
}

}  // namespace

TEST_CASE("balance basics") {
  const auto one = run_balance(single_edge(), 4);
  CHECK(one.value == 1.0);
  CHECK(one.assignments == 1);

  SimInstance empty;
  empty.n_offline = 3;
  empty.capacity = 2;
  const auto none = run_balance(empty, 4);
  CHECK(none.value == 0.0);
  CHECK(none.stats.alpha[0] == 3);

  // Ties go to the lowest index; then the emptier bidder wins.
  SimInstance tie;
  tie.n_offline = 2;
  tie.capacity = 2;
  tie.arrivals = {{0, 1}, {0, 1}, {1, 0}};
  const auto run = run_balance(tie, 2);
  CHECK(run.used == std::vector<int>{2, 1});
}

TEST_CASE("balance on the triangular b-matching instance") {
  const auto run = run_balance(triangular_instance(100, 100), 20);
  const double ratio = run.value / 100.0;
  CHECK(std::abs(ratio - (1.0 - 1.0 / std::numbers::e)) <= 0.02);
  CHECK(slab_audit(run.stats, true).passed);
}

TEST_CASE("balance never beats the offline optimum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 49;
    const auto inst = random_instance(rng, n, 1 + trial % 4, n * 2, 0.15);
    const auto run = run_balance(inst, 5);
    const long opt = offline_max_assignments(inst);
    CAPTURE(trial);
    CHECK(run.assignments <= opt);
    CHECK(run.value <= inst.n_offline);
  }
}

TEST_CASE("max flow agrees with brute force on tiny instances") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 80; ++trial) {
    const auto inst = random_instance(rng, 3, 1 + trial % 2, 6, 0.4);
    CAPTURE(trial);
    CHECK(offline_max_assignments(inst) == brute_force_opt(inst));
  }
  CHECK(offline_max_assignments(triangular_instance(30, 3)) == 90);
}

TEST_CASE("slab statistics") {
  // b = 4, N = 2: spends 0, 2, 3, 4 -> rho 0, 1/2, 3/4, 1.
  const auto stats = slab_stats({0, 2, 3, 4}, 4, 2);
  CHECK(stats.alpha[0] == 1);  // rho = 0
  CHECK(stats.alpha[1] == 2);  // rho = 1/2 sits on a boundary and moves up; rho = 3/4
  CHECK(stats.alpha[2] == 1);  // rho = 1
  CHECK(stats.beta(1) == doctest::Approx(1.5));   // three bidders fill slab 1
  CHECK(stats.beta(2) == doctest::Approx(0.75));  // 1/4 + 1/2
  CHECK(stats.rho[2] == doctest::Approx(0.75));
  long total = 0;
  for (long a : stats.alpha) total += a;
  CHECK(total == 4);
  for (int j = 1; j <= 2; ++j) CHECK(stats.beta(j) <= 4.0 / 2 + 1e-15);

  CHECK_THROWS_AS(slab_stats({5}, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(slab_stats({1}, 4, 0), std::invalid_argument);
}

TEST_CASE("slab audit") {
  SUBCASE("fabricated counter-stats fail at p = 1") {
    SlabStats bad;
    bad.slabs = 3;
    bad.alpha = {5, 0, 0, 0};
    bad.beta_units = {0, 0, 0};
    bad.unit_denominator = 3;
    const auto audit = slab_audit(bad, true);
    CHECK_FALSE(audit.passed);
    REQUIRE(audit.first_violation);
    CHECK(*audit.first_violation == 1);
  }
  SUBCASE("full budgets pass vacuously") {
    const auto stats = slab_stats({6, 6, 6}, 6, 3);
    CHECK(stats.alpha[3] == 3);
    CHECK(slab_audit(stats, true).passed);
  }
  SUBCASE("refused without the hypothesis") {
    CHECK_THROWS_AS(slab_audit(slab_stats({1}, 2, 2), false), std::invalid_argument);
  }
  SUBCASE("triangular instance") {
    const auto run = run_balance(triangular_instance(100, 100), 20);
    CHECK(slab_audit(run.stats, true).passed);
  }
}

TEST_CASE("slab audit on planted instances") {
  int audited = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 5 + static_cast<int>(seed % 30);
    const int slabs = 1 + static_cast<int>(seed % 5);
    const int capacity = slabs * (1 + static_cast<int>(seed % 4));
    const auto inst = planted_instance(n, capacity, seed);
    REQUIRE(offline_max_assignments(inst) == static_cast<long>(n) * capacity);
    const auto run = run_balance(inst, slabs);
    CAPTURE(seed);
    CHECK(slab_audit(run.stats, true).passed);
    ++audited;
  }
  CHECK(audited == 200);
}

TEST_CASE("ranking basics") {
  const auto one = run_ranking(single_edge(), {.trials = 50, .seed = 9});
  CHECK(one.estimate == 1.0);
  CHECK(one.std_error == 0.0);

  const auto full = run_ranking(complete_instance(12), {.trials = 500, .seed = 1});
  CHECK(full.estimate == 12.0);

  SimInstance multi = single_edge();
  multi.capacity = 2;
  CHECK_THROWS_AS(run_ranking(multi, {}), std::invalid_argument);
  CHECK_THROWS_AS(run_ranking(single_edge(), {.trials = 0}), std::invalid_argument);
}

TEST_CASE("ranking is reproducible and shard-invariant") {
  const auto inst = triangular_instance(40, 1);
  const auto a = run_ranking(inst, {.trials = 20'000, .seed = 77, .workers = 1});
  const auto b = run_ranking(inst, {.trials = 20'000, .seed = 77, .workers = 1});
  const auto c = run_ranking(inst, {.trials = 20'000, .seed = 77, .workers = 3});
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK(a.estimate == c.estimate);
  CHECK(a.std_error == c.std_error);

  const auto d = run_ranking(inst, {.trials = 20'000, .seed = 78});
  CHECK(a.estimate != d.estimate);
  CHECK(std::abs(a.estimate - d.estimate) <= 4.0 * std::hypot(a.std_error, d.std_error));
}

TEST_CASE("ranking on the triangular instance") {
  const auto rep = run_ranking(triangular_instance(100, 1), {.trials = 100'000, .seed = 2024});
  const double ratio = rep.estimate / 100.0;
  CHECK(ratio >= 0.61);
  CHECK(ratio <= 0.66);
}

TEST_CASE("threshold policy values") {
  CHECK(threshold_policy_value(3, 1) == doctest::Approx(0.5));
  CHECK(threshold_policy_value(2, 0) == doctest::Approx(0.5));
  CHECK(threshold_policy_value(1, 0) == 1.0);
  const long n = 10'000;
  CHECK(std::abs(threshold_policy_value(n, static_cast<long>(n / std::numbers::e)) - 1.0 / std::numbers::e) <= 1e-3);
  CHECK_THROWS_AS(threshold_policy_value(5, 5), std::invalid_argument);
  CHECK_THROWS_AS(threshold_policy_value(5, -1), std::invalid_argument);
  // Direct sum over the position of the best candidate: with best at position
  // i > k, success iff the best of the first i-1 is among the first k.
  for (long m = 2; m <= 12; ++m)
    for (long k = 1; k < m; ++k) {
      double direct = 0;
      for (long i = k + 1; i <= m; ++i) direct += (1.0 / m) * (static_cast<double>(k) / (i - 1));
      CHECK(threshold_policy_value(m, k) == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("policy recovery from LP vectors") {
  SUBCASE("zero vector") {
    const auto p = secretary_policy_from_lp(Eigen::VectorXd::Zero(5));
    for (double a : p.accept_prob) CHECK(a == 0.0);
  }
  SUBCASE("x1 = 1") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
    x(0) = 1.0;
    const auto p = secretary_policy_from_lp(x);
    CHECK(p.accept_prob[0] == 1.0);
    CHECK(p.reachable[0]);
    for (int i = 1; i < 4; ++i) {
      CHECK_FALSE(p.reachable[i]);
      CHECK(p.accept_prob[i] == 0.0);
    }
  }
  SUBCASE("optimal LP vector is a threshold rule") {
    const long n = 100;
    const auto sol = solve(build_secretary(n));
    REQUIRE(sol.optimal());
    const auto p = secretary_policy_from_lp(sol.x);
    long first_accept = -1;
    for (long i = 0; i < n; ++i) {
      if (!p.reachable[i]) continue;
      if (p.accept_prob[i] > 0.5 && first_accept < 0) first_accept = i + 1;
      if (first_accept < 0) {
        CHECK(p.accept_prob[i] <= 1e-9);
      } else {
        CHECK(p.accept_prob[i] >= 1.0 - 1e-9);
      }
    }
    CHECK(static_cast<double>(first_accept - 1) / n == doctest::Approx(1.0 / std::numbers::e).epsilon(0.05));
  }
  SUBCASE("infeasible vectors are rejected") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    x(1) = 0.6;  // 2 * 0.6 > 1
    CHECK_THROWS_AS(secretary_policy_from_lp(x), std::invalid_argument);
    x.setConstant(-0.1);
    CHECK_THROWS_AS(secretary_policy_from_lp(x), std::invalid_argument);
  }
}

TEST_CASE("secretary simulation") {
  SUBCASE("n = 1") {
    PolicyTable p{1, {1.0}, {true}};
    CHECK(run_secretary(p, {.trials = 100}).estimate == 1.0);
  }
  SUBCASE("accept the first candidate") {
    const int n = 8;
    PolicyTable p{n, std::vector<double>(n, 1.0), std::vector<bool>(n, true)};
    const auto rep = run_secretary(p, {.trials = 200'000, .seed = 3});
    CHECK(std::abs(rep.estimate - 1.0 / n) <= 4.0 * rep.std_error);
  }
  SUBCASE("LP-derived policies match the LP value") {
    for (long n : {10L, 50L, 100L, 200L}) {
      const auto sol = solve(build_secretary(n));
      REQUIRE(sol.optimal());
      const auto rep = run_secretary(secretary_policy_from_lp(sol.x), {.trials = 200'000, .seed = 42});
      CAPTURE(n);
      CHECK(std::abs(rep.estimate - sol.objective_value) <= 3.0 * rep.std_error);
    }
  }
  SUBCASE("malformed table") {
    PolicyTable p{3, {1.0}, {true}};
    CHECK_THROWS_AS(run_secretary(p, {}), std::invalid_argument);
  }
}

TEST_CASE("instance text format") {
  const auto inst = planted_instance(6, 2, 17);
  std::stringstream buf;
  write_instance(buf, inst);
  const auto back = read_instance(buf);
  CHECK(back.n_offline == inst.n_offline);
  CHECK(back.capacity == inst.capacity);
  CHECK(back.arrivals == inst.arrivals);

  std::istringstream text("3 2 1\n1 3\n\n");
  const auto parsed = read_instance(text);
  CHECK(parsed.arrivals[0] == std::vector<int>{0, 2});
  CHECK(parsed.arrivals[1].empty());

  std::istringstream out_of_range("2 1 1\n3\n");
  CHECK_THROWS_AS(read_instance(out_of_range), std::runtime_error);
  std::istringstream short_file("2 2 1\n1\n");
  CHECK_THROWS_AS(read_instance(short_file), std::runtime_error);
  std::istringstream junk("2 1 1\n1 x\n");
  CHECK_THROWS_AS(read_instance(junk), std::runtime_error);
  std::istringstream zero_b("2 0 0\n");
  CHECK_THROWS_AS(read_instance(zero_b), std::runtime_error);
}

TEST_CASE("report JSON") {
  const auto j = nlohmann::json::parse(to_json({10, 0.5, 0.01, 99}));
  CHECK(j["trials"] == 10);
  CHECK(j["estimate"] == 0.5);
  CHECK(j["std_error"] == 0.01);
  CHECK(j["seed"] == 99);
}
