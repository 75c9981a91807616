#pragma once

// Critical initial data where the elliptic modulus degenerates, and the
// singly-periodic expansions that replace the elliptic model there.

#include <optional>
#include <vector>

#include "qp2/elliptic_approx.hpp"
#include "qp2/types.hpp"

namespace qp2 {

inline constexpr double kGroupingTolerance = 1e-12;

struct CriticalValue {
  std::vector<DegenerateKind> kinds;   // more than one when values coincide
  std::optional<ComplexScalar> E0;     // empty for the |E0| -> infinity case
  bool vanishing_constant = false;     // c0 or A0 degenerates to 0 or infinity
};

std::vector<CriticalValue> critical_E0_values(ComplexScalar t0);

struct DegenerateCase {
  DegenerateKind kind;
  std::vector<DegenerateKind> group;   // kind plus any coincident kinds
  ComplexScalar delta;                 // 1/E0 for K2To1_b
  ComplexScalar c0;
  std::optional<ComplexScalar> A0;     // sine cases only
};

// delta of E0 measured from the critical value of `kind` (1/E0 for K2To1_b).
ComplexScalar critical_offset(DegenerateKind kind, ComplexScalar E0, ComplexScalar t0);

// Case data from the principal quartic roots. DomainError for t0 = 0.
DegenerateCase make_case(DegenerateKind kind, ComplexScalar E0, ComplexScalar t0);

std::optional<DegenerateCase> classify(ComplexScalar E0, ComplexScalar t0, double tol);

// The expansion g(z) of the case. PoleProximityError on vanishing denominators.
ComplexScalar degenerate_predict(const DegenerateCase& dc, ComplexScalar z, ComplexScalar t0);

// Rotates c0 or A0 by a power of i so the expansion follows the same branch
// as the given full curve.
DegenerateCase align_to_curve(const DegenerateCase& dc, const CurveModel& curve);

// E0 on the critical value of `kind` shifted by `offset` (for K2To1_b the
// offset is E0 itself).
ComplexScalar offset_E0(DegenerateKind kind, ComplexScalar t0, ComplexScalar offset);

// Default comparison grids: [-1.2, 1.2] (K2To1_a), [-1, 1] (K2To1_b), [0, 2 pi] otherwise.
std::vector<double> default_z_grid(DegenerateKind kind, int points = 61);

struct CaseGap {
  ComplexScalar E0;
  ComplexScalar k;
  double sup_error = 0.0;
};

// sup over the grid of |g_full(z) - g_degenerate(z)|.
CaseGap degenerate_gap(DegenerateKind kind, ComplexScalar t0, ComplexScalar offset,
                       const std::vector<double>& zs);

// Log-ratio order estimates between successive entries.
std::vector<double> convergence_orders(const std::vector<double>& offsets, const std::vector<double>& errors);

// Order of the remainder claimed for each case: 1/2, 3/2 (|E0|^{-3/2}), 3/2, 3/2, 1.
double expected_order(DegenerateKind kind);

}  // namespace qp2
