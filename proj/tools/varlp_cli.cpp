// varlp: command-line front end for the LP families, continuum checks and
// online simulations. Errors go to stderr as {"error": "..."} with exit 1.

#include "varlp/interval_opt.hpp"
#include "varlp/lp_families.hpp"
#include "varlp/lp_io.hpp"
#include "varlp/online_sim.hpp"
#include "varlp/simplex.hpp"
#include "varlp/studies.hpp"
#include "varlp/variational.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace varlp;

constexpr const char* kSeedEnv = "VARLP_SEED";

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      std::size_t used = 0;
      const auto seed = std::stoull(env, &used);
      if (used == std::string(env).size()) return seed;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
  }
  return 1;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::pair<int, int> parse_pair(const std::string& text, const char* what) {
  std::istringstream in(text);
  int a = 0, b = 0;
  char comma = 0;
  if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof())
    throw std::invalid_argument(std::string(what) + " expects 'n,b', got '" + text + "'");
  return {a, b};
}

std::vector<long> parse_sizes(const std::string& text) {
  std::vector<long> sizes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad size '" + item + "' in --sizes");
    sizes.push_back(n);
  }
  if (sizes.empty()) throw std::invalid_argument("--sizes is empty");
  return sizes;
}

json report_json(const SimReport& r) { return json::parse(to_json(r)); }

json to_std_vector(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor-revealing LP families, their continuum limits and online simulations"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Build and solve one family instance");
  std::string solve_family, dump_path;
  bool solve_json = false;
  solve_cmd->add_option("--family", solve_family, "kind:n, e.g. balance:64")->required();
  solve_cmd->add_option("--dump-lp", dump_path, "Write the LP in plain-text form");
  solve_cmd->add_flag("--json", solve_json, "Emit JSON including x and duals");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve a family over several sizes");
  std::string sweep_kind, sweep_sizes, sweep_out;
  bool extrapolate = false;
  int sweep_workers = 1;
  sweep_cmd->add_option("--family", sweep_kind, "toy|balance|ranking|secretary")->required();
  sweep_cmd->add_option("--sizes", sweep_sizes, "Comma-separated sizes")->required();
  sweep_cmd->add_option("--out", sweep_out, "CSV output (family,n,value,status,ms)")->required();
  sweep_cmd->add_flag("--extrapolate", extrapolate, "Fit value(n) = L + C/n and print L");
  sweep_cmd->add_option("--workers", sweep_workers, "Concurrent solves")->check(CLI::PositiveNumber);

  // ode
  auto* ode_cmd = app.add_subcommand("ode", "Integrate a tight-constraint ODE with RK4");
  std::string ode_kind, ode_out;
  double ode_step = 1e-4;
  ode_cmd->add_option("--kind", ode_kind, "balance|ranking")->required();
  ode_cmd->add_option("--step", ode_step, "Step size in (0, 1e-2]")->required();
  ode_cmd->add_option("--out", ode_out, "Trajectory CSV (t,value)")->required();

  // vc-check
  auto* vc_cmd = app.add_subcommand("vc-check", "Sample a continuum profile into its LP family");
  std::string vc_profile, vc_family;
  vc_cmd->add_option("--profile", vc_profile, "ToyG|BalanceG|RankingG|SecretaryG")->required();
  vc_cmd->add_option("--family", vc_family, "kind:n")->required();

  // kkt-check
  auto* kkt_cmd = app.add_subcommand("kkt-check", "Multiplier residuals of the secretary optimizer");
  long kkt_grid = 10'000;
  double kkt_perturb = 0.0;
  double kkt_tol = 1e-6;
  kkt_cmd->add_option("--grid", kkt_grid, "Grid points")->check(CLI::Range(10L, 10'000'000L));
  kkt_cmd->add_option("--perturb", kkt_perturb, "Add EPS * t (1 - t) to the candidate");
  kkt_cmd->add_option("--tol", kkt_tol, "Residual tolerance");

  // interval-search
  auto* iv_cmd = app.add_subcommand("interval-search", "Grid search over interval sequences");
  int iv_k = 1;
  double iv_resolution = 1e-2, iv_min_sep = 1e-2;
  bool iv_json = false;
  iv_cmd->add_option("--k", iv_k, "Number of intervals (1 or 2)")->required();
  iv_cmd->add_option("--resolution", iv_resolution, "Grid spacing");
  iv_cmd->add_option("--min-sep", iv_min_sep, "Minimum gap between consecutive points");
  iv_cmd->add_flag("--json", iv_json, "Emit JSON");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run an online algorithm");
  std::string sim_algo, sim_instance, sim_planted, sim_triangular;
  long sim_policy_n = 0;
  long sim_trials = 100'000;
  std::optional<std::uint64_t> sim_seed;
  int sim_slabs = 20, sim_workers = 1;
  bool sim_json = false;
  sim_cmd->add_option("algorithm", sim_algo, "balance|ranking|secretary")
      ->required()
      ->check(CLI::IsMember({"balance", "ranking", "secretary"}));
  auto* inst_opt = sim_cmd->add_option("--instance", sim_instance, "Instance file");
  auto* planted_opt = sim_cmd->add_option("--planted", sim_planted, "n,b: planted perfect b-matching");
  auto* tri_opt = sim_cmd->add_option("--triangular", sim_triangular, "n,b: upper-triangular instance");
  auto* lp_opt = sim_cmd->add_option("--policy-from-lp", sim_policy_n, "n: policy from the secretary LP optimum");
  inst_opt->excludes(planted_opt)->excludes(tri_opt)->excludes(lp_opt);
  planted_opt->excludes(tri_opt)->excludes(lp_opt);
  tri_opt->excludes(lp_opt);
  sim_cmd->add_option("--trials", sim_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_seed, std::string("Seed (default: $") + kSeedEnv + " or 1)");
  sim_cmd->add_option("--slabs", sim_slabs, "Slab count N for the BALANCE audit")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--workers", sim_workers, "Worker threads")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--json", sim_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", e.what()}}.dump() << '\n';
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }

  try {
    if (*solve_cmd) {
      const auto spec = FamilySpec::parse(solve_family);
      if (spec.size > kMaxSimplexSize)
        throw std::invalid_argument("size above the simplex cap " + std::to_string(kMaxSimplexSize));
      const auto lp = build_family(spec);
      if (!dump_path.empty()) {
        auto out = open_out(dump_path);
        write_lp(out, lp);
      }
      const auto sol = solve(lp);
      if (solve_json) {
        json j{{"family", spec.str()},           {"status", to_string(sol.status)},
               {"iterations", sol.iterations},   {"objective", sol.objective_value},
               {"duality_gap", sol.duality_gap}, {"max_primal_violation", sol.max_primal_violation}};
        if (sol.optimal()) {
          j["x"] = to_std_vector(sol.x);
          j["dual"] = to_std_vector(sol.dual);
        }
        std::cout << j.dump() << '\n';
      } else {
        std::cout.precision(12);
        std::cout << spec.str() << ": " << to_string(sol.status) << ", objective " << sol.objective_value
                  << ", gap " << sol.duality_gap << ", " << sol.iterations << " pivots\n";
      }
      return sol.optimal() ? 0 : 2;
    }

    if (*sweep_cmd) {
      const auto kind = parse_family_kind(sweep_kind);
      auto table = sweep_family(kind, parse_sizes(sweep_sizes), {.workers = sweep_workers});
      std::optional<LimitEstimate> est;
      if (extrapolate) est = limit_estimate(table);
      auto out = open_out(sweep_out);
      write_sweep_csv(out, table);
      std::cout.precision(12);
      std::cout << table.rows.size() << " sizes written to " << sweep_out << '\n';
      if (est)
        std::cout << "limit " << est->limit << " (C = " << est->constant << ", error bar " << est->error_bar
                  << ", |L - target| = " << est->target_error << ")\n";
      return 0;
    }

    if (*ode_cmd) {
      const auto kind = parse_tight_ode(ode_kind);
      const auto traj = integrate_tight_ode<double>(kind, ode_step);
      auto out = open_out(ode_out);
      write_trajectory_csv(out, traj);
      std::cout.precision(15);
      std::cout << "terminal " << traj.terminal() << ", exact " << tight_ode_exact(kind, 1.0) << ", error "
                << std::abs(traj.terminal() - tight_ode_exact(kind, 1.0)) << '\n';
      return 0;
    }

    if (*vc_cmd) {
      const ContinuumProfile profile{parse_profile_tag(vc_profile)};
      const auto spec = FamilySpec::parse(vc_family);
      const auto rep = discretize_profile(profile, spec);
      json j{{"profile", to_string(profile.tag)},
             {"family", spec.str()},
             {"max_violation", rep.max_violation},
             {"objective", rep.objective},
             {"continuum_objective", rep.continuum_objective},
             {"objective_gap", rep.objective_gap}};
      if (rep.worst_row) j["worst_row"] = *rep.worst_row;
      std::cout << j.dump() << '\n';
      return 0;
    }

    if (*kkt_cmd) {
      const Eigen::VectorXd grid = uniform_unit_grid(kkt_grid);
      const ContinuumProfile u_star{ProfileTag::kSecretaryU};
      Eigen::VectorXd u(grid.size());
      for (Eigen::Index k = 0; k < grid.size(); ++k) u(k) = u_star(grid(k)) + kkt_perturb * grid(k) * (1 - grid(k));
      const auto check = multiplier_check(grid, u, kkt_tol);
      const auto& r = check.residuals;
      json j{{"grid", kkt_grid},
             {"perturb", kkt_perturb},
             {"stationarity", r.stationarity},
             {"slack_product", r.slack_product},
             {"derivative_product", r.derivative_product},
             {"negative_square", r.negative_square},
             {"max_residual", r.max_residual()},
             {"passed", r.passed}};
      j["first_active"] = r.first_active ? json(*r.first_active) : json(nullptr);
      std::cout << j.dump() << '\n';
      return r.passed ? 0 : 3;
    }

    if (*iv_cmd) {
      const auto result = search_best(iv_k, iv_resolution, iv_min_sep);
      if (iv_json) {
        std::cout << to_json(result) << '\n';
      } else {
        std::cout.precision(12);
        std::cout << "best s =";
        for (double p : result.best_s) std::cout << ' ' << p;
        std::cout << ", g = " << result.best_value << " (grid best " << result.grid_best_value << " over "
                  << result.grid_points_evaluated << " sequences)\n";
      }
      return 0;
    }

    if (*sim_cmd) {
      const SimOptions options{sim_trials, sim_seed ? *sim_seed : default_seed(), sim_workers};
      json j;
      if (sim_algo == "secretary") {
        if (sim_policy_n < 1) throw std::invalid_argument("secretary simulation needs --policy-from-lp n");
        if (sim_policy_n > kMaxSimplexSize) throw std::invalid_argument("--policy-from-lp n above the simplex cap");
        const auto sol = solve(build_secretary(sim_policy_n));
        if (!sol.optimal()) throw std::runtime_error("secretary LP did not solve: " + std::string(to_string(sol.status)));
        const auto report = run_secretary(secretary_policy_from_lp(sol.x), options);
        j = report_json(report);
        j["lp_objective"] = sol.objective_value;
      } else {
        SimInstance instance;
        std::optional<long> known_opt;  // offline optimum in assignments, when known by construction
        if (!sim_instance.empty()) {
          std::ifstream in(sim_instance);
          if (!in) throw std::runtime_error("cannot open instance '" + sim_instance + "'");
          instance = read_instance(in);
        } else if (!sim_planted.empty()) {
          const auto [n, b] = parse_pair(sim_planted, "--planted");
          instance = planted_instance(n, b, options.seed);
          known_opt = static_cast<long>(n) * b;
        } else if (!sim_triangular.empty()) {
          const auto [n, b] = parse_pair(sim_triangular, "--triangular");
          instance = triangular_instance(n, b);
          known_opt = static_cast<long>(n) * b;
        } else {
          throw std::invalid_argument("simulate " + sim_algo + " needs --instance, --planted or --triangular");
        }
        const long opt = known_opt ? *known_opt : offline_max_assignments(instance);
        if (sim_algo == "balance") {
          const auto run = run_balance(instance, sim_slabs);
          j = report_json({1, run.value, 0.0, options.seed});
          j["assignments"] = run.assignments;
          j["ratio"] = opt > 0 ? static_cast<double>(run.assignments) / static_cast<double>(opt) : 1.0;
          j["alpha"] = run.stats.alpha;
          std::vector<double> beta;
          for (int s = 1; s <= run.stats.slabs; ++s) beta.push_back(run.stats.beta(s));
          j["beta"] = beta;
          if (opt == static_cast<long>(instance.n_offline) * instance.capacity) {
            const auto audit = slab_audit(run.stats, true);
            j["slab_audit"] = audit.passed;
            if (audit.first_violation) j["slab_first_violation"] = *audit.first_violation;
          }
        } else {
          const auto report = run_ranking(instance, options);
          j = report_json(report);
          j["ratio"] = opt > 0 ? report.estimate / static_cast<double>(opt) : 1.0;
        }
        j["offline_optimum"] = opt;
      }
      if (sim_json) {
        std::cout << j.dump() << '\n';
      } else {
        std::cout << j.dump(2) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
