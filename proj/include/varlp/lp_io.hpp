// Plain-text LP dump:
//
//   <min|max> <n_vars> <n_rows>
//   <objective coefficients>
//   <row coefficients> <= | >= | = <rhs>        (one line per row)
//   <lower bounds>
//   <upper bounds>
//
// Numbers are written with max_digits10 so a dump reads back bit-exact.
// Infinite bounds are written as "inf" / "-inf".

#ifndef VARLP_LP_IO_HPP
#define VARLP_LP_IO_HPP

#include "varlp/dense_lp.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace varlp {

namespace detail {

template <typename Scalar>
void write_number(std::ostream& out, Scalar v) {
  if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
  } else {
    out << v;
  }
}

template <typename Scalar>
Scalar read_number(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("lp dump: unexpected end of input");
  if (token == "inf" || token == "+inf") return std::numeric_limits<Scalar>::infinity();
  if (token == "-inf") return -std::numeric_limits<Scalar>::infinity();
  std::istringstream parse(token);
  Scalar v;
  if (!(parse >> v) || !parse.eof()) throw std::runtime_error("lp dump: bad number '" + token + "'");
  return v;
}

}  // namespace detail

template <typename Scalar>
void write_lp(std::ostream& out, const DenseLp<Scalar>& lp) {
  const auto old_precision = out.precision(std::numeric_limits<Scalar>::max_digits10);
  out << (lp.sense == Sense::kMaximize ? "max" : "min") << ' ' << lp.n_vars() << ' ' << lp.n_rows()
      << '\n';
  auto write_vector = [&](const auto& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (j) out << ' ';
      detail::write_number(out, v(j));
    }
    out << '\n';
  };
  write_vector(lp.objective);
  for (Eigen::Index i = 0; i < lp.n_rows(); ++i) {
    for (Eigen::Index j = 0; j < lp.n_vars(); ++j) {
      detail::write_number(out, lp.rows(i, j));
      out << ' ';
    }
    out << to_string(lp.relations[i]) << ' ';
    detail::write_number(out, lp.rhs(i));
    out << '\n';
  }
  write_vector(lp.var_lower);
  write_vector(lp.var_upper);
  out.precision(old_precision);
}

template <typename Scalar>
DenseLp<Scalar> read_lp(std::istream& in) {
  DenseLp<Scalar> lp;
  std::string sense;
  Eigen::Index n = 0, m = 0;
  if (!(in >> sense >> n >> m)) throw std::runtime_error("lp dump: bad header");
  if (sense == "min") {
    lp.sense = Sense::kMinimize;
  } else if (sense == "max") {
    lp.sense = Sense::kMaximize;
  } else {
    throw std::runtime_error("lp dump: sense must be min or max");
  }
  if (n < 1 || m < 0) throw std::runtime_error("lp dump: bad dimensions");
  lp.objective.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) lp.objective(j) = detail::read_number<Scalar>(in);
  lp.rows.resize(m, n);
  lp.rhs.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) lp.rows(i, j) = detail::read_number<Scalar>(in);
    std::string rel;
    in >> rel;
    if (rel == "<=") {
      lp.relations.push_back(Relation::kLessEqual);
    } else if (rel == ">=") {
      lp.relations.push_back(Relation::kGreaterEqual);
    } else if (rel == "=") {
      lp.relations.push_back(Relation::kEqual);
    } else {
      throw std::runtime_error("lp dump: bad relation '" + rel + "'");
    }
    lp.rhs(i) = detail::read_number<Scalar>(in);
  }
  lp.var_lower.resize(n);
  lp.var_upper.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) lp.var_lower(j) = detail::read_number<Scalar>(in);
  for (Eigen::Index j = 0; j < n; ++j) lp.var_upper(j) = detail::read_number<Scalar>(in);
  lp.validate();
  return lp;
}

}  // namespace varlp

#endif  // VARLP_LP_IO_HPP
