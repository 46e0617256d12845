#pragma once

#include <functional>
#include <vector>

namespace sfvol {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping once the
/// bracket is narrower than `tol`.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol);

struct SimplexOptions {
  int max_iterations = 5000;
  double f_tol = 1e-10;   // spread of objective values across the simplex
  double x_tol = 1e-8;    // simplex diameter
  double initial_step = 0.1;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with standard coefficients (1, 2, 0.5, 0.5).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& options = {});

}  // namespace sfvol
