#include "qp2/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "qp2/errors.hpp"

namespace qp2 {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  ComplexScalar value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment evaluate(const std::function<ComplexScalar(double)>& fn, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const ComplexScalar fc = fn(center);
  ComplexScalar kronrod = kKronrodWeights[7] * fc;
  ComplexScalar gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const ComplexScalar pair = fn(center - dx) + fn(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<ComplexScalar(double)>& fn, double lo, double hi,
                           const QuadratureOptions& options) {
  std::priority_queue<Segment> heap;
  Segment first = evaluate(fn, lo, hi);
  ComplexScalar total = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;

  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    if (!std::isfinite(error) || !is_finite(total))
      throw ConvergenceError("quadrature produced a non-finite value");
    if (intervals >= options.max_intervals)
      throw ConvergenceError("quadrature did not converge within " +
                             std::to_string(options.max_intervals) + " intervals");
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Segment left = evaluate(fn, worst.lo, mid);
    Segment right = evaluate(fn, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum to shed the drift of the incremental updates.
  ComplexScalar resummed{0.0, 0.0};
  double err = 0.0;
  while (!heap.empty()) {
    resummed += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {resummed, err, intervals};
}

}  // namespace qp2
