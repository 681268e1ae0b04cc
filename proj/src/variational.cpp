#include "varlp/variational.hpp"

#include "varlp/dense_lp.hpp"
#include "varlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varlp {

namespace {

constexpr int kQuadratureCells = 4000;

double second_divided_difference(const Eigen::VectorXd& x, const Eigen::VectorXd& f, Eigen::Index s) {
  const double d01 = (f(s + 1) - f(s)) / (x(s + 1) - x(s));
  const double d12 = (f(s + 2) - f(s + 1)) / (x(s + 2) - x(s + 1));
  return (d12 - d01) / (x(s + 2) - x(s));
}

// Derivative at x(k) of the quadratic through points s, s+1, s+2.
double stencil_derivative(const Eigen::VectorXd& x, const Eigen::VectorXd& f, Eigen::Index s, Eigen::Index k) {
  const double d01 = (f(s + 1) - f(s)) / (x(s + 1) - x(s));
  const double d012 = second_divided_difference(x, f, s);
  return d01 + d012 * ((x(k) - x(s)) + (x(k) - x(s + 1)));
}

// Derivative using only stencils that stay inside the regime of point k.
Eigen::VectorXd regime_derivative(const Eigen::VectorXd& x, const Eigen::VectorXd& f, const std::vector<bool>& regime) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd out(n);
  auto same = [&](Eigen::Index s, Eigen::Index len, Eigen::Index k) {
    if (s < 0 || s + len > n) return false;
    for (Eigen::Index i = s; i < s + len; ++i)
      if (regime[i] != regime[k]) return false;
    return true;
  };
  for (Eigen::Index k = 0; k < n; ++k) {
    if (same(k - 1, 3, k)) {
      out(k) = stencil_derivative(x, f, k - 1, k);
    } else if (same(k - 2, 3, k)) {
      out(k) = stencil_derivative(x, f, k - 2, k);
    } else if (same(k, 3, k)) {
      out(k) = stencil_derivative(x, f, k, k);
    } else if (same(k - 1, 2, k)) {
      out(k) = (f(k) - f(k - 1)) / (x(k) - x(k - 1));
    } else if (same(k, 2, k)) {
      out(k) = (f(k + 1) - f(k)) / (x(k + 1) - x(k));
    } else {
      const Eigen::Index s = std::clamp<Eigen::Index>(k - 1, 0, n - 3);
      out(k) = stencil_derivative(x, f, s, k);
    }
  }
  return out;
}

FamilyKind family_of(ProfileTag tag) {
  switch (tag) {
    case ProfileTag::kToyG:
      return FamilyKind::kToy;
    case ProfileTag::kBalanceG:
      return FamilyKind::kBalance;
    case ProfileTag::kRankingG:
      return FamilyKind::kRanking;
    case ProfileTag::kSecretaryG:
      return FamilyKind::kSecretary;
    default:
      break;
  }
  throw std::invalid_argument("profile '" + std::string(to_string(tag)) + "' is not a g-profile");
}

}  // namespace

std::string_view to_string(ProfileTag tag) {
  switch (tag) {
    case ProfileTag::kToyG:
      return "ToyG";
    case ProfileTag::kBalanceG:
      return "BalanceG";
    case ProfileTag::kBalanceU:
      return "BalanceU";
    case ProfileTag::kBalanceV:
      return "BalanceV";
    case ProfileTag::kRankingG:
      return "RankingG";
    case ProfileTag::kRankingU:
      return "RankingU";
    case ProfileTag::kSecretaryG:
      return "SecretaryG";
    case ProfileTag::kSecretaryU:
      return "SecretaryU";
  }
  return "?";
}

ProfileTag parse_profile_tag(std::string_view text) {
  for (ProfileTag tag : {ProfileTag::kToyG, ProfileTag::kBalanceG, ProfileTag::kBalanceU, ProfileTag::kBalanceV,
                         ProfileTag::kRankingG, ProfileTag::kRankingU, ProfileTag::kSecretaryG,
                         ProfileTag::kSecretaryU})
    if (text == to_string(tag)) return tag;
  throw std::invalid_argument("unknown profile '" + std::string(text) + "'");
}

double ContinuumProfile::operator()(double t) const {
  switch (tag) {
    case ProfileTag::kToyG:
    case ProfileTag::kBalanceG:
    case ProfileTag::kRankingG:
      return std::exp(-t);
    case ProfileTag::kBalanceU:
    case ProfileTag::kRankingU:
      return 1.0 - std::exp(-t);
    case ProfileTag::kBalanceV:
      return std::exp(-t) - (1.0 - t);
    case ProfileTag::kSecretaryG:
      return t <= threshold ? 0.0 : threshold / t;
    case ProfileTag::kSecretaryU:
      return t <= threshold ? 0.0 : 1.0 - threshold / t;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> ContinuumProfile::breakpoints() const {
  if (tag == ProfileTag::kSecretaryG || tag == ProfileTag::kSecretaryU) return {threshold};
  return {};
}

bool ContinuumProfile::is_g_profile() const {
  return tag == ProfileTag::kToyG || tag == ProfileTag::kBalanceG || tag == ProfileTag::kRankingG ||
         tag == ProfileTag::kSecretaryG;
}

double eval_profile(const ContinuumProfile& profile, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::out_of_range("profile argument outside [0, 1]");
  return profile(t);
}

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj) {
  const auto old = out.precision(17);
  out << "t,value\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) out << traj.t[k] << ',' << traj.value[k] << '\n';
  out.precision(old);
}

TightOde parse_tight_ode(std::string_view text) {
  if (text == "balance") return TightOde::kBalance;
  if (text == "ranking") return TightOde::kRanking;
  throw std::invalid_argument("ode kind must be balance or ranking");
}

Eigen::VectorXd sample_family_vector(const std::function<double(double)>& g, const FamilySpec& family) {
  if (family.size < 1) throw std::invalid_argument("family size must be >= 1");
  const long n = family.size;
  const double N = static_cast<double>(n);
  Eigen::VectorXd x(n);
  for (long i = 1; i <= n; ++i) {
    const double gi = g(static_cast<double>(i) / N);
    switch (family.kind) {
      case FamilyKind::kToy:
      case FamilyKind::kRanking:
        x(i - 1) = gi;
        break;
      case FamilyKind::kBalance:
        x(i - 1) = gi / N;
        break;
      case FamilyKind::kSecretary:
        x(i - 1) = gi / static_cast<double>(i);
        break;
    }
  }
  return x;
}

DiscretizationReport discretize_function(const std::function<double(double)>& g, const FamilySpec& family,
                                         const std::vector<double>& breakpoints) {
  const DenseLp<double> lp = build_family(family);
  DiscretizationReport report;
  report.x = sample_family_vector(g, family);
  const auto feas = check_feasibility(lp, report.x, 0.0);
  report.max_violation = feas.max_violation;
  report.worst_row = feas.worst_row;
  report.objective = family_objective(family.kind, report.x);
  if (family.kind == FamilyKind::kBalance) {
    report.continuum_objective =
        integrate([&](double t) { return g(t) * (1.0 - t); }, 0.0, 1.0, kQuadratureCells, breakpoints);
  } else {
    report.continuum_objective = integrate(g, 0.0, 1.0, kQuadratureCells, breakpoints);
  }
  report.objective_gap = std::abs(report.objective - report.continuum_objective);
  return report;
}

DiscretizationReport discretize_profile(const ContinuumProfile& profile, const FamilySpec& family) {
  if (family_of(profile.tag) != family.kind)
    throw std::invalid_argument("profile " + std::string(to_string(profile.tag)) + " does not belong to family " +
                                std::string(to_string(family.kind)));
  return discretize_function(profile, family, profile.breakpoints());
}

Eigen::VectorXd grid_derivative(const Eigen::VectorXd& grid, const Eigen::VectorXd& values) {
  const Eigen::Index n = grid.size();
  if (n < 3 || values.size() != n) throw std::invalid_argument("grid_derivative needs >= 3 matching points");
  Eigen::VectorXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const bool has_center = k >= 1 && k + 1 < n;
    const bool has_left = k >= 2;
    const bool has_right = k + 2 < n;
    Eigen::Index best = -1;
    double best_curvature = std::numeric_limits<double>::infinity();
    for (Eigen::Index s : {has_left ? k - 2 : -1, has_right ? k : -1}) {
      if (s < 0) continue;
      const double c = std::abs(second_divided_difference(grid, values, s));
      if (c < best_curvature) {
        best_curvature = c;
        best = s;
      }
    }
    if (has_center) {
      const double c = std::abs(second_divided_difference(grid, values, k - 1));
      if (best < 0 || !(best_curvature < 0.25 * c)) best = k - 1;
    }
    out(k) = stencil_derivative(grid, values, best, k);
  }
  return out;
}

double MultiplierResiduals::max_residual() const {
  return std::max({stationarity, slack_product, derivative_product, negative_square});
}

MultiplierCheck multiplier_check(const Eigen::VectorXd& grid, const Eigen::VectorXd& u, double tol,
                                 double activity_threshold) {
  const Eigen::Index n = grid.size();
  if (n < 3) throw std::invalid_argument("multiplier_check needs at least 3 grid points");
  if (u.size() != n) throw std::invalid_argument("candidate length differs from grid");
  if (!(grid(0) > 0.0) || grid(n - 1) > 1.0) throw std::invalid_argument("grid must lie in (0, 1]");
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (!(grid(k + 1) > grid(k))) throw std::invalid_argument("grid must be strictly increasing");
    if (u(k + 1) < u(k)) throw std::invalid_argument("candidate u must be non-decreasing");
  }

  MultiplierCheck out;
  MultiplierProfile& p = out.profile;
  p.grid = grid;
  p.u = u;
  p.u_dot = grid_derivative(grid, u);
  p.w_sq = p.u_dot;
  p.v_sq = Eigen::VectorXd::Ones(n) - u - p.u_dot.cwiseProduct(grid);
  p.mu1 = Eigen::VectorXd::Zero(n);
  p.mu2 = Eigen::VectorXd::Zero(n);
  p.active.assign(n, false);

  for (Eigen::Index k = 0; k < n; ++k) {
    if (p.u_dot(k) > activity_threshold) {
      p.active[k] = true;
      p.mu1(k) = -std::log(grid(k)) - 1.0;
      p.mu2(k) = grid(k) * (1.0 + p.mu1(k));
      if (!out.residuals.first_active) out.residuals.first_active = grid(k);
    }
  }
  // Inactive runs: mu2 continues the adjacent active value (next run first).
  for (Eigen::Index k = 0; k < n;) {
    if (p.active[k]) {
      ++k;
      continue;
    }
    Eigen::Index end = k;
    while (end < n && !p.active[end]) ++end;
    double level = 0.0;
    if (end < n) {
      level = p.mu2(end);
    } else if (k > 0) {
      level = p.mu2(k - 1);
    }
    p.mu2.segment(k, end - k).setConstant(level);
    k = end;
  }

  const Eigen::VectorXd mu2_dot = regime_derivative(grid, p.mu2, p.active);
  MultiplierResiduals& r = out.residuals;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = std::sqrt(std::max(p.w_sq(k), 0.0));
    r.stationarity = std::max(r.stationarity, std::abs(mu2_dot(k) - p.mu1(k)));
    r.slack_product = std::max(r.slack_product, std::abs(p.v_sq(k) * p.mu1(k)));
    r.derivative_product =
        std::max(r.derivative_product, std::abs(w * (p.mu2(k) - grid(k) * (1.0 + p.mu1(k)))));
    r.negative_square = std::max({r.negative_square, -p.v_sq(k), -p.w_sq(k)});
  }
  r.passed = r.max_residual() <= tol;
  return out;
}

Eigen::VectorXd uniform_unit_grid(long points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  Eigen::VectorXd grid(points);
  for (long k = 0; k < points; ++k) grid(k) = static_cast<double>(k + 1) / static_cast<double>(points);
  return grid;
}

}  // namespace varlp
