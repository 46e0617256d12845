#include "sfvol/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sfvol/error.hpp"

namespace sfvol {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  if (!(hi > lo)) throw DomainError("golden_section_minimize: need hi > lo");
  if (!(tol > 0.0)) throw DomainError("golden_section_minimize: tol must be > 0");
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > tol) {
    ++it;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  ScalarMinimum out;
  out.iterations = it;
  // the end points are candidates too: the minimum may sit on the boundary
  const double fa = f(a), fb = f(b);
  out.x = fc < fd ? c : d;
  out.value = std::min(fc, fd);
  if (fa < out.value) out = {a, fa, it};
  if (fb < out.value) out = {b, fb, it};
  return out;
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& options) {
  const std::size_t n = start.size();
  if (n == 0) throw DomainError("nelder_mead: empty start vector");

  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += options.initial_step;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(n + 1);
  SimplexResult result;
  auto point_along = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                         double coef) {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (worst[j] - centroid[j]);
    return p;
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return vals[i] < vals[j]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diameter = std::max(diameter, std::abs(pts[i][j] - pts[best][j]));
    const double spread = std::abs(vals[worst] - vals[best]);
    result.iterations = it;
    if (spread <= options.f_tol * (std::abs(vals[best]) + options.f_tol) &&
        diameter <= options.x_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
    }

    auto reflected = point_along(centroid, pts[worst], -1.0);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      auto expanded = point_along(centroid, pts[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = std::move(expanded);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(reflected);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = std::move(reflected);
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    auto contracted = point_along(centroid, outside ? reflected : pts[worst], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = std::move(contracted);
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      vals[i] = f(pts[i]);
    }
  }

  const auto best_it = std::min_element(vals.begin(), vals.end());
  result.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
  result.value = *best_it;
  return result;
}

}  // namespace sfvol
