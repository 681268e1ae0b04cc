// Composite Gauss-Legendre quadrature with user breakpoints.

#ifndef VARLP_QUADRATURE_HPP
#define VARLP_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace varlp {

namespace detail {

// 5-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 9.
inline constexpr std::array<double, 5> kGaussNodes = {
    -0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
    0.538469310105683091036314420700, 0.906179845938663992797626878299};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.236926885056189087514264040720, 0.478628670499366468686217177561,
    0.568888888888888888888888888889, 0.478628670499366468686217177561,
    0.236926885056189087514264040720};

template <typename F>
double gauss_cell(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) s += kGaussWeights[k] * f(mid + half * kGaussNodes[k]);
  return half * s;
}

}  // namespace detail

/// Integral of f over [a, b] using `cells` equal cells, each additionally
/// split at any breakpoint inside it. Breakpoints mark kinks or jumps of f;
/// f itself is never evaluated at a cell edge.
template <typename F>
double integrate(const F& f, double a, double b, int cells, const std::vector<double>& breakpoints = {}) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
  if (cells < 1) throw std::invalid_argument("integrate: cells < 1");
  if (b == a) return 0;
  std::vector<double> cuts = breakpoints;
  std::sort(cuts.begin(), cuts.end());
  const double h = (b - a) / cells;
  double total = 0;
  for (int c = 0; c < cells; ++c) {
    const double lo = a + c * h;
    const double hi = c + 1 == cells ? b : a + (c + 1) * h;
    double left = lo;
    for (double cut : cuts) {
      if (cut > left && cut < hi) {
        total += detail::gauss_cell(f, left, cut);
        left = cut;
      }
    }
    total += detail::gauss_cell(f, left, hi);
  }
  return total;
}

/// Running integrals  F(grid[k]) = integral of f over [from, grid[k]]  for a
/// non-decreasing grid starting at or after `from`.
template <typename F>
std::vector<double> cumulative_integral(const F& f, double from, const std::vector<double>& grid,
                                        const std::vector<double>& breakpoints = {}, int cells_per_step = 1) {
  std::vector<double> out(grid.size());
  double acc = 0;
  double prev = from;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < prev) throw std::invalid_argument("cumulative_integral: grid must be non-decreasing");
    acc += integrate(f, prev, grid[k], cells_per_step, breakpoints);
    out[k] = acc;
    prev = grid[k];
  }
  return out;
}

}  // namespace varlp

#endif  // VARLP_QUADRATURE_HPP
