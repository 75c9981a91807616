#pragma once

// Complex-modulus Jacobi elliptic functions and the complete integrals used by
// the leading-order model. Everything here is pure and reentrant.

#include <utility>

#include "qp2/quadrature.hpp"
#include "qp2/types.hpp"

namespace qp2::elliptic {

struct Modulus {
  ComplexScalar k;
  ComplexScalar m;  // k^2

  static Modulus from_k(ComplexScalar k) { return {k, k * k}; }
};

// Fundamental periods of A sn(z; k): omega1 = 4K, omega2 = 2iK'.
struct PeriodPair {
  ComplexScalar omega1;
  ComplexScalar omega2;
};

struct JacobiTriple {
  ComplexScalar sn;
  ComplexScalar cn;
  ComplexScalar dn;
};

inline constexpr double kSeriesMargin = 0.05;
inline constexpr double kPoleMagnitude = 1e8;

// h(m) = sum_j Gamma(j+1/2)^2 / Gamma(j+1)^2 m^j = 2 K(m).
// Throws ConvergenceError for |m| > 1 - margin.
ComplexScalar h_series(ComplexScalar m, double margin = kSeriesMargin);

// (2 h(m), i h(1-m)); ConvergenceError unless both m and 1-m lie in the series disk.
PeriodPair periods(ComplexScalar m);

// Period lattice (4K, 2iK') of sn(.; k) for any |k| < 1. K' is taken from
// the series, the reciprocal-parameter relation or quadrature, whichever
// first passes a numerical periodicity check. ConvergenceError otherwise.
PeriodPair period_lattice(ComplexScalar k);

// z minus the nearest lattice point m1 omega1 + m2 omega2 (coordinates
// rounded to the nearest integers).
ComplexScalar reduce_to_cell(ComplexScalar z, const PeriodPair& lattice);

// Quarter period K(k). Uses the series where it converges and first-kind
// quadrature over [0,1] otherwise.
ComplexScalar quarter_period(ComplexScalar k);

// sn, cn, dn by descending Landen transformation closed with sin/cos once
// |k| < 1e-8. No pole check; k = +-1 throws DomainError.
JacobiTriple jacobi_all(ComplexScalar z, ComplexScalar k);

// Throws PoleProximityError when |sn| exceeds 1e8.
ComplexScalar jacobi_sn(ComplexScalar z, ComplexScalar k);
std::pair<ComplexScalar, ComplexScalar> jacobi_cn_dn(ComplexScalar z, ComplexScalar k);

struct PathOptions {
  QuadratureOptions quadrature{};
  double branch_clearance = 1e-8;
};

// Principal z with sn(z; k) = w: integral of du / sqrt((1-u^2)(1-k^2 u^2))
// along the straight segment [0, w], branch continued from +1 at u = 0.
// Throws BranchError if the segment grazes one of +-1, +-1/k in its interior.
ComplexScalar inverse_sn(ComplexScalar w, ComplexScalar k, const PathOptions& options = {});

struct PiOptions {
  QuadratureOptions quadrature{};
  bool deform_contour = false;
  double deformation_radius = 1e-4;
  double pole_clearance = 1e-8;
};

// Pi(alpha2, k) = int_0^1 du / ((1 - alpha2 u^2) sqrt((1-u^2)(1-k^2 u^2))).
ComplexScalar complete_pi(ComplexScalar alpha2, ComplexScalar k, const PiOptions& options = {});

// Integral of dz / (1 - alpha2 sn^2(z; k)) along the straight path from
// z_start to z_start + omega. Over the real cycle omega = 4K this equals
// 4 Pi(alpha2, k).
ComplexScalar cycle_third_kind(ComplexScalar alpha2, ComplexScalar k, ComplexScalar z_start,
                               ComplexScalar omega, const QuadratureOptions& options = {});

}  // namespace qp2::elliptic
