#include "varlp/lp_families.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace varlp {

namespace {

void require_size(long n, long cap) {
  if (n < 1) throw std::invalid_argument("family size must be >= 1");
  if (n > cap) throw std::invalid_argument("family size exceeds cap of " + std::to_string(cap));
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kToy:
      return "toy";
    case FamilyKind::kBalance:
      return "balance";
    case FamilyKind::kRanking:
      return "ranking";
    case FamilyKind::kSecretary:
      return "secretary";
  }
  return "?";
}

FamilyKind parse_family_kind(std::string_view text) {
  for (FamilyKind k : {FamilyKind::kToy, FamilyKind::kBalance, FamilyKind::kRanking,
                       FamilyKind::kSecretary})
    if (text == to_string(k)) return k;
  throw std::invalid_argument("unknown family '" + std::string(text) + "'");
}

FamilySpec FamilySpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("family spec must look like kind:n, got '" + std::string(text) + "'");
  FamilySpec spec;
  spec.kind = parse_family_kind(text.substr(0, colon));
  const std::string_view digits = text.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), spec.size);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || spec.size < 1)
    throw std::invalid_argument("family size must be a positive integer, got '" +
                                std::string(digits) + "'");
  return spec;
}

std::string FamilySpec::str() const { return std::string(to_string(kind)) + ":" + std::to_string(size); }

DenseLp<double> build_toy(long n) {
  require_size(n, kMaxSimplexSize);
  auto lp = DenseLp<double>::unit_box(n, Sense::kMinimize);
  lp.family_tag = FamilyTag::kToy;
  const double inv = 1.0 / static_cast<double>(n);
  lp.objective.setConstant(inv);
  lp.rows = Eigen::MatrixXd::Zero(2 * n - 1, n);
  lp.rhs = Eigen::VectorXd::Zero(2 * n - 1);
  for (long i = 0; i < n; ++i) {
    lp.rows.row(i).head(i).setConstant(inv);
    lp.rows(i, i) = 1.0;
    lp.rhs(i) = 1.0;
    lp.relations.push_back(Relation::kGreaterEqual);
  }
  for (long i = 0; i + 1 < n; ++i) {
    lp.rows(n + i, i) = 1.0;
    lp.rows(n + i, i + 1) = -1.0;
    lp.relations.push_back(Relation::kGreaterEqual);
  }
  return lp;
}

DenseLp<double> build_balance(long n) {
  require_size(n, kMaxSimplexSize);
  auto lp = DenseLp<double>::unit_box(n, Sense::kMaximize);
  lp.family_tag = FamilyTag::kBalance;
  const double N = static_cast<double>(n);
  lp.rows = Eigen::MatrixXd::Zero(n, n);
  lp.rhs.resize(n);
  for (long p = 1; p <= n; ++p) {
    lp.objective(p - 1) = 1.0 - static_cast<double>(p) / N;
    for (long i = 1; i <= p; ++i) lp.rows(p - 1, i - 1) = 1.0 + static_cast<double>(p - i) / N;
    lp.rhs(p - 1) = static_cast<double>(p) / N;
    lp.relations.push_back(Relation::kLessEqual);
  }
  return lp;
}

DenseLp<double> build_ranking(long n) {
  require_size(n, kMaxSimplexSize);
  auto lp = DenseLp<double>::unit_box(n, Sense::kMinimize);
  lp.family_tag = FamilyTag::kRanking;
  const double inv = 1.0 / static_cast<double>(n);
  lp.objective.setConstant(inv);
  lp.rows = Eigen::MatrixXd::Zero(n, n);
  lp.rhs = Eigen::VectorXd::Ones(n);
  for (long i = 0; i < n; ++i) {
    lp.rows.row(i).head(i).setConstant(inv);
    lp.rows(i, i) = 1.0 + inv;
    lp.relations.push_back(Relation::kGreaterEqual);
  }
  return lp;
}

DenseLp<double> build_secretary(long n) {
  require_size(n, kMaxSimplexSize);
  auto lp = DenseLp<double>::unit_box(n, Sense::kMaximize);
  lp.family_tag = FamilyTag::kSecretary;
  lp.rows = Eigen::MatrixXd::Zero(n, n);
  lp.rhs = Eigen::VectorXd::Ones(n);
  for (long i = 1; i <= n; ++i) {
    lp.objective(i - 1) = static_cast<double>(i) / static_cast<double>(n);
    lp.rows.row(i - 1).head(i - 1).setOnes();
    lp.rows(i - 1, i - 1) = static_cast<double>(i);
    lp.relations.push_back(Relation::kLessEqual);
  }
  return lp;
}

DenseLp<double> build_family(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::kToy:
      return build_toy(spec.size);
    case FamilyKind::kBalance:
      return build_balance(spec.size);
    case FamilyKind::kRanking:
      return build_ranking(spec.size);
    case FamilyKind::kSecretary:
      return build_secretary(spec.size);
  }
  throw std::invalid_argument("unknown family");
}

Eigen::VectorXd tight_solution_ranking(long n) {
  require_size(n, kMaxRecurrenceSize);
  const double inv = 1.0 / static_cast<double>(n);
  Eigen::VectorXd x(n);
  long double prefix = 0;
  for (long i = 0; i < n; ++i) {
    x(i) = static_cast<double>((1.0L - prefix * inv) / (1.0L + inv));
    prefix += x(i);
  }
  return x;
}

Eigen::VectorXd tight_solution_toy(long n) {
  require_size(n, kMaxRecurrenceSize);
  const double inv = 1.0 / static_cast<double>(n);
  Eigen::VectorXd x(n);
  long double prefix = 0;
  for (long i = 0; i < n; ++i) {
    x(i) = static_cast<double>(1.0L - prefix * inv);
    prefix += x(i);
  }
  return x;
}

double tight_objective_ranking(long n) {
  require_size(n, kMaxRecurrenceSize);
  const long double inv = 1.0L / static_cast<long double>(n);
  long double prefix = 0;
  for (long i = 0; i < n; ++i) prefix += (1.0L - prefix * inv) / (1.0L + inv);
  return static_cast<double>(prefix * inv);
}

double tight_objective_toy(long n) {
  require_size(n, kMaxRecurrenceSize);
  const long double inv = 1.0L / static_cast<long double>(n);
  long double prefix = 0;
  for (long i = 0; i < n; ++i) prefix += 1.0L - prefix * inv;
  return static_cast<double>(prefix * inv);
}

double family_objective(FamilyKind kind, const Eigen::VectorXd& x) {
  const long n = x.size();
  if (n < 1) throw std::invalid_argument("empty vector");
  const double N = static_cast<double>(n);
  switch (kind) {
    case FamilyKind::kToy:
    case FamilyKind::kRanking:
      return x.sum() / N;
    case FamilyKind::kBalance: {
      double s = 0;
      for (long i = 1; i <= n; ++i) s += x(i - 1) * (1.0 - static_cast<double>(i) / N);
      return s;
    }
    case FamilyKind::kSecretary: {
      double s = 0;
      for (long i = 1; i <= n; ++i) s += x(i - 1) * static_cast<double>(i) / N;
      return s;
    }
  }
  throw std::invalid_argument("unknown family");
}

double family_limit(FamilyKind kind) {
  const double inv_e = 1.0 / std::numbers::e;
  switch (kind) {
    case FamilyKind::kToy:
    case FamilyKind::kRanking:
      return 1.0 - inv_e;
    case FamilyKind::kBalance:
    case FamilyKind::kSecretary:
      return inv_e;
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace varlp
