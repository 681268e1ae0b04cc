// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "varlp/certificate.hpp"
#include "varlp/interval_opt.hpp"
#include "varlp/lp_families.hpp"
#include "varlp/online_sim.hpp"
#include "varlp/simplex.hpp"
#include "varlp/studies.hpp"
#include "varlp/variational.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace varlp;

namespace {

using Clock = std::chrono::steady_clock;

const double kInvE = 1.0 / std::numbers::e;
const double kOneMinusInvE = 1.0 - 1.0 / std::numbers::e;
constexpr std::uint64_t kSeed = 20240601;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) detail += " [x]";
  }
};

// Every family solve made by criteria 1-4, for the certificate half of 10.
struct CertLog {
  long solves = 0;
  long failures = 0;
  double worst_gap = 0;

  LpSolution<double> solve_and_log(const DenseLp<double>& lp) {
    auto sol = solve(lp);
    ++solves;
    if (!sol.optimal()) {
      ++failures;
      return sol;
    }
    const auto cert = certify(lp, sol, 1e-8);
    worst_gap = std::max(worst_gap, cert.gap / (1.0 + std::abs(cert.primal_objective)));
    if (!cert.passed) ++failures;
    return sol;
  }
};

CertLog certs;

// Sweep rows go through the certificate log so criterion 10 sees them.
SweepTable certified_sweep(FamilyKind kind, const std::vector<long>& sizes) {
  SweepTable table;
  table.family = kind;
  table.limit_target = family_limit(kind);
  for (long n : sizes) {
    const auto start = Clock::now();
    const auto sol = certs.solve_and_log(build_family({kind, n}));
    table.rows.push_back({n, sol.objective_value, sol.status, seconds_since(start) * 1e3, false,
                          sol.duality_gap / (1.0 + std::abs(sol.objective_value))});
  }
  return table;
}

Outcome balance_limit() {
  Outcome out;
  const auto start = Clock::now();
  std::vector<long> sizes;
  for (long n = 64; n <= 1024; n += 64) sizes.push_back(n);
  auto table = certified_sweep(FamilyKind::kBalance, sizes);
  bool optimal = true, monotone = true;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    optimal = optimal && table.rows[k].status == SolveStatus::kOptimal;
    if (k > 0) monotone = monotone && table.rows[k].value > table.rows[k - 1].value;
  }
  const auto est = limit_estimate(table);
  const double raw = std::abs(table.rows.back().value - kInvE);
  const double elapsed = seconds_since(start);
  out.require(optimal, "all optimal");
  out.require(monotone, "increasing over N=64..1024 step 64");
  out.require(est.target_error <= 1e-3, fmt("extrapolated %.10f, |L-1/e|=%.2e <= 1e-3", est.limit, est.target_error));
  out.require(raw <= 5e-3, fmt("N=1024 value %.10f, off by %.2e <= 5e-3", table.rows.back().value, raw));
  out.require(elapsed <= 300.0, fmt("%.1fs <= 300s", elapsed));
  return out;
}

Outcome ranking_limit() {
  Outcome out;
  const auto start = Clock::now();
  const double value = tight_objective_ranking(1'000'000);
  const double elapsed = seconds_since(start);
  const double err = std::abs(value - kOneMinusInvE);
  out.require(err <= 1e-5, fmt("recurrence n=1e6 %.10f, off by %.2e <= 1e-5", value, err));
  out.require(elapsed < 1.0, fmt("%.3fs < 1s", elapsed));
  const auto sol = certs.solve_and_log(build_ranking(512));
  const double diff = std::abs(sol.objective_value - tight_objective_ranking(512));
  out.require(sol.optimal() && diff <= 1e-9, fmt("simplex n=512 vs recurrence %.2e <= 1e-9", diff));
  return out;
}

Outcome secretary_limit() {
  Outcome out;
  const auto big = certs.solve_and_log(build_secretary(512));
  const double err = std::abs(big.objective_value - kInvE);
  out.require(big.optimal() && err <= 2e-3, fmt("LP_S(512) %.10f, off by %.2e <= 2e-3", big.objective_value, err));
  double worst = 0;
  long worst_n = 0;
  bool all_optimal = true;
  for (long n = 1; n <= 200; ++n) {
    double best = 0;
    for (long k = 0; k < n; ++k) best = std::max(best, threshold_policy_value(n, k));
    const auto sol = certs.solve_and_log(build_secretary(n));
    all_optimal = all_optimal && sol.optimal();
    const double d = std::abs(sol.objective_value - best);
    if (d > worst) {
      worst = d;
      worst_n = n;
    }
  }
  out.require(all_optimal && worst <= 1e-9,
              fmt("n=1..200 max |LP - best threshold| %.2e (n=%ld) <= 1e-9", worst, worst_n));
  return out;
}

Outcome toy_limit() {
  Outcome out;
  auto table = certified_sweep(FamilyKind::kToy, {64, 128, 256, 512, 1024});
  bool optimal = true;
  for (const auto& row : table.rows) optimal = optimal && row.status == SolveStatus::kOptimal;
  const auto est = limit_estimate(table);
  out.require(optimal, "simplex sweep n=64..1024 optimal");
  out.require(est.target_error <= 1e-3,
              fmt("extrapolated %.10f, |L-(1-1/e)|=%.2e <= 1e-3", est.limit, est.target_error));
  return out;
}

Outcome ode_agreement() {
  Outcome out;
  for (TightOde kind : {TightOde::kBalance, TightOde::kRanking}) {
    const char* name = kind == TightOde::kBalance ? "v(1)" : "u(1)";
    const double exact = tight_ode_exact(kind, 1.0);
    const double err = std::abs(integrate_tight_ode<double>(kind, 1e-4).terminal() - exact);
    out.require(err <= 1e-8, fmt("%s err %.1e <= 1e-8", name, err));
    // The step-halving ratio at 1e-3 needs extended precision: in double the
    // errors there (~1e-15) are already at roundoff.
    auto terminal_err = [kind](long double h) {
      return std::abs(integrate_tight_ode<long double>(kind, h).terminal() - tight_ode_exact(kind, 1.0L));
    };
    const double ratio = static_cast<double>(terminal_err(1e-3L) / terminal_err(5e-4L));
    out.require(ratio >= 12.0 && ratio <= 20.0, fmt("halving ratio %.2f in [12,20]", ratio));
  }
  return out;
}

Outcome discretization_bridge() {
  Outcome out;
  const long n = 1000;
  const struct {
    ProfileTag tag;
    FamilyKind kind;
  } cases[] = {{ProfileTag::kBalanceG, FamilyKind::kBalance},
               {ProfileTag::kRankingG, FamilyKind::kRanking},
               {ProfileTag::kSecretaryG, FamilyKind::kSecretary}};
  for (const auto& c : cases) {
    const auto rep = discretize_profile(ContinuumProfile{c.tag}, {c.kind, n});
    const double gap = std::abs(rep.objective - family_limit(c.kind));
    out.require(rep.max_violation <= 2.0 / n && gap <= 2e-3,
                fmt("%s viol %.1e gap %.1e", std::string(to_string(c.tag)).c_str(), rep.max_violation, gap));
  }
  return out;
}

Outcome multiplier_conditions() {
  Outcome out;
  const Eigen::VectorXd grid = uniform_unit_grid(10'000);
  const ContinuumProfile u_star{ProfileTag::kSecretaryU};
  const Eigen::VectorXd u = grid.unaryExpr([&](double t) { return u_star(t); });
  const auto good = multiplier_check(grid, u, 1e-6);
  out.require(good.residuals.passed && good.residuals.max_residual() <= 1e-6,
              fmt("u* max residual %.1e <= 1e-6", good.residuals.max_residual()));
  const Eigen::VectorXd bumped = u.array() + 0.01 * grid.array() * (1.0 - grid.array());
  const auto bad = multiplier_check(grid, bumped, 1e-6);
  out.require(!bad.residuals.passed && bad.residuals.max_residual() > 1e-3,
              fmt("perturbed max residual %.2e > 1e-3", bad.residuals.max_residual()));
  return out;
}

Outcome interval_objective() {
  Outcome out;
  const auto one = search_best(1, 1e-3, 1e-3);
  const double da = std::abs(one.best_s[0] - kInvE);
  const double db = std::abs(one.best_s[1] - 1.0);
  const double dv = std::abs(one.best_value - kInvE);
  out.require(da <= 1e-3 && db <= 1e-3, fmt("K=1 s=(%.6f, %.6f)", one.best_s[0], one.best_s[1]));
  out.require(dv <= 1e-6, fmt("|g-1/e|=%.1e <= 1e-6", dv));
  const auto two = search_best(2, 1e-2, 1e-2);
  out.require(two.best_value < kInvE, fmt("K=2 max over %lld grid sequences %.10f < 1/e",
                                          static_cast<long long>(two.grid_points_evaluated), two.best_value));
  return out;
}

Outcome simulations() {
  Outcome out;
  const auto start = Clock::now();
  const auto ranking = run_ranking(triangular_instance(100, 1), {.trials = 100'000, .seed = kSeed});
  const double r_ratio = ranking.estimate / 100.0;
  out.require(r_ratio >= 0.61 && r_ratio <= 0.66, fmt("RANKING ratio %.4f in [0.61,0.66]", r_ratio));

  const auto balance = run_balance(triangular_instance(100, 100), 20);
  const double b_ratio = balance.value / 100.0;
  out.require(std::abs(b_ratio - kOneMinusInvE) <= 0.02, fmt("BALANCE ratio %.4f within 0.02 of 1-1/e", b_ratio));

  const auto lp = solve(build_secretary(100));
  const auto sec = run_secretary(secretary_policy_from_lp(lp.x), {.trials = 1'000'000, .seed = kSeed});
  const double z = std::abs(sec.estimate - lp.objective_value) / sec.std_error;
  out.require(lp.optimal() && z <= 3.0,
              fmt("secretary %.5f vs LP %.5f, %.2f SE <= 3", sec.estimate, lp.objective_value, z));
  const double elapsed = seconds_since(start);
  out.require(elapsed <= 180.0, fmt("%.1fs <= 180s", elapsed));
  return out;
}

Outcome slab_audit_and_certificates() {
  Outcome out;
  long passed = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const int slabs = 2 + static_cast<int>(k % 9);
    const int capacity = slabs * (1 + static_cast<int>(k % 5));  // N divides b
    const int n = 10 + static_cast<int>(k % 41);
    const auto run = run_balance(planted_instance(n, capacity, kSeed + k), slabs);
    if (slab_audit(run.stats, true).passed) ++passed;
  }
  out.require(passed == 200, fmt("slab audit %ld/200 planted instances", passed));
  out.require(certs.solves > 0 && certs.failures == 0,
              fmt("certificates %ld/%ld, worst relative gap %.1e <= 1e-8", certs.solves - certs.failures, certs.solves,
                  certs.worst_gap));
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"balance limit", balance_limit},
      {"ranking limit", ranking_limit},
      {"secretary limit", secretary_limit},
      {"toy limit", toy_limit},
      {"ODE vs closed form", ode_agreement},
      {"discretization bridge", discretization_bridge},
      {"multiplier conditions", multiplier_conditions},
      {"interval objective", interval_objective},
      {"simulations", simulations},
      {"slab audit + certificates", slab_audit_and_certificates},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("threw: ") + e.what();
    }
    if (!out.pass) ++failed;
    std::printf("%s  %2zu  %s: %s\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
