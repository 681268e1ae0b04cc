// Continuum limits of the LP families.
//
// Each family has a g-profile (the limit of its scaled LP solution), and the
// substitutions u = integral of g (or of g/t for the secretary family) and
// v = integral of u turn the continuum programs into first-order ODEs when
// the binding constraint is taken with equality.

#ifndef VARLP_VARIATIONAL_HPP
#define VARLP_VARIATIONAL_HPP

#include "varlp/lp_families.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace varlp {

enum class ProfileTag {
  kToyG,
  kBalanceG,
  kBalanceU,
  kBalanceV,
  kRankingG,
  kRankingU,
  kSecretaryG,
  kSecretaryU,
};

std::string_view to_string(ProfileTag tag);
ProfileTag parse_profile_tag(std::string_view text);

/// Closed-form optimizer on [0, 1]:
///   ToyG = BalanceG = RankingG = e^-t,  BalanceU = RankingU = 1 - e^-t,
///   BalanceV = e^-t - (1 - t),
///   SecretaryG = 0 on [0, c], c/t after;  SecretaryU = 0 on [0, c], 1 - c/t after,
/// with c = `threshold` (1/e for the optimum).
struct ContinuumProfile {
  ProfileTag tag = ProfileTag::kToyG;
  double threshold = 1.0 / std::numbers::e;

  double operator()(double t) const;
  /// Points where the profile is not smooth.
  std::vector<double> breakpoints() const;
  bool is_g_profile() const;
};

/// Throws std::out_of_range for t outside [0, 1].
double eval_profile(const ContinuumProfile& profile, double t);

template <typename Scalar>
struct Trajectory {
  std::vector<Scalar> t;
  std::vector<Scalar> value;

  Scalar terminal() const { return value.back(); }
};

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj);

enum class TightOde {
  kBalance,  // v' = t - v, v(0) = 0;  exact v = e^-t - (1 - t)
  kRanking,  // u' = 1 - u, u(0) = 0;  exact u = 1 - e^-t
};

TightOde parse_tight_ode(std::string_view text);

template <typename Scalar>
Scalar tight_ode_exact(TightOde kind, Scalar t) {
  using std::exp;
  return kind == TightOde::kBalance ? exp(-t) - (Scalar(1) - t) : Scalar(1) - exp(-t);
}

/// Classical fourth-order Runge-Kutta on [0, 1]. The step is rounded down to
/// 1/ceil(1/step) so the last node lands exactly on t = 1.
template <typename Scalar>
Trajectory<Scalar> integrate_tight_ode(TightOde kind, Scalar step) {
  if (!(step > 0)) throw std::invalid_argument("ode step must be positive");
  if (step > Scalar(1e-2)) throw std::invalid_argument("ode step must be <= 1e-2");
  const auto n = static_cast<long>(std::ceil(static_cast<double>(Scalar(1) / step) - 1e-9));
  const Scalar h = Scalar(1) / Scalar(n);
  auto rhs = [kind](Scalar t, Scalar y) { return kind == TightOde::kBalance ? t - y : Scalar(1) - y; };

  Trajectory<Scalar> traj;
  traj.t.reserve(n + 1);
  traj.value.reserve(n + 1);
  Scalar y = 0;
  traj.t.push_back(0);
  traj.value.push_back(y);
  for (long k = 0; k < n; ++k) {
    const Scalar t = Scalar(k) * h;
    const Scalar k1 = rhs(t, y);
    const Scalar k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Scalar k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Scalar k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    traj.t.push_back(Scalar(k + 1) * h);
    traj.value.push_back(y);
  }
  return traj;
}

/// Family LP vector sampled from a g-profile, and how far it is from the
/// LP feasible set and from the continuum objective.
struct DiscretizationReport {
  Eigen::VectorXd x;
  double max_violation = 0;
  std::optional<Eigen::Index> worst_row;  // 0-based
  double objective = 0;
  double continuum_objective = 0;
  double objective_gap = 0;
};

/// Sampling rules: x_i = g(i/n) for toy and ranking, g(i/N)/N for balance,
/// g(i/n)/i for secretary.
Eigen::VectorXd sample_family_vector(const std::function<double(double)>& g, const FamilySpec& family);

/// Requires the matching g-profile (ToyG/toy, BalanceG/balance, ...).
DiscretizationReport discretize_profile(const ContinuumProfile& profile, const FamilySpec& family);

/// Same as discretize_profile for an arbitrary g. The continuum objective is
/// computed by quadrature of the family's objective functional.
DiscretizationReport discretize_function(const std::function<double(double)>& g, const FamilySpec& family,
                                         const std::vector<double>& breakpoints = {});

/// Derivative of tabulated values on a strictly increasing grid, using
/// quadratic three-point stencils. The centered stencil is preferred; a
/// one-sided stencil replaces it when its second divided difference is much
/// smaller, which keeps kinks from leaking into their neighbours.
Eigen::VectorXd grid_derivative(const Eigen::VectorXd& grid, const Eigen::VectorXd& values);

struct MultiplierProfile {
  Eigen::VectorXd grid;
  Eigen::VectorXd u;
  Eigen::VectorXd u_dot;
  Eigen::VectorXd w_sq;  // u_dot
  Eigen::VectorXd v_sq;  // 1 - u - u_dot * t
  Eigen::VectorXd mu1;
  Eigen::VectorXd mu2;
  std::vector<bool> active;  // u_dot above the activity threshold
};

struct MultiplierResiduals {
  double stationarity = 0;        // max |mu2' - mu1|
  double slack_product = 0;       // max |v^2 * mu1|
  double derivative_product = 0;  // max |w * (mu2 - t (1 + mu1))|
  double negative_square = 0;     // max(-v^2, -w^2, 0)
  std::optional<double> first_active;
  double max_residual() const;
  bool passed = false;
};

struct MultiplierCheck {
  MultiplierProfile profile;
  MultiplierResiduals residuals;
};

/// Builds the auxiliary slack decomposition u + w^2 t + v^2 = 1, u' = w^2 for
/// a candidate u and the multipliers
///   active (u' > threshold):  mu1 = -ln t - 1,  mu2 = t (1 + mu1)
///   inactive:                 mu1 = 0,          mu2 held constant from the adjacent active run
/// and reports how well the stationarity conditions hold. The slackness
/// condition v * mu1 = 0 is measured as v^2 * mu1, which has the same zero set
/// and does not amplify finite-difference noise through a square root.
MultiplierCheck multiplier_check(const Eigen::VectorXd& grid, const Eigen::VectorXd& u, double tol,
                                 double activity_threshold = 1e-6);

/// Uniform grid k/points, k = 1..points.
Eigen::VectorXd uniform_unit_grid(long points);

}  // namespace varlp

#endif  // VARLP_VARIATIONAL_HPP
