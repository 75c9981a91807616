#pragma once

#include <functional>

#include "qp2/types.hpp"

namespace qp2 {

struct QuadratureOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  int max_intervals = 4000;
};

struct QuadratureResult {
  ComplexScalar value;
  double error_estimate;
  int intervals;
};

// Globally adaptive 7/15-point Gauss-Kronrod integration of a complex-valued
// function over [lo, hi]. Nodes never touch the endpoints, so integrable
// endpoint singularities are tolerated (slowly). Throws ConvergenceError when
// the interval budget runs out.
QuadratureResult integrate(const std::function<ComplexScalar(double)>& fn, double lo, double hi,
                           const QuadratureOptions& options = {});

}  // namespace qp2
