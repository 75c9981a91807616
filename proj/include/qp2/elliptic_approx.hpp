#pragma once

// Leading-order elliptic model for the a = 1 case: the Mobius map to the
// canonical biquadratic, the modulus, and the discrete flow z -> z + p on
// G(z) = A sn(z; k).

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qp2/core.hpp"
#include "qp2/elliptic_fn.hpp"
#include "qp2/types.hpp"

namespace qp2 {

inline constexpr double kCriticalE0Tolerance = 1e-9;
inline constexpr double kUnitModulusTolerance = 1e-10;
inline constexpr double kFitTolerance = 1e-6;
inline constexpr double kPredictPoleTolerance = 1e-10;

struct CanonicalForm {
  ComplexScalar c;
  ComplexScalar gamma;
  ComplexScalar zeta;
  ComplexScalar E0;
  ComplexScalar t0;
};

// Throws CriticalPointError when E0 is within 1e-9 of 2 +- 4 t0; the error
// lists every critical kind sitting at that E0.
CanonicalForm canonical_transform(ComplexScalar E0, ComplexScalar t0);

struct ModulusChoice {
  ComplexScalar beta;
  ComplexScalar k;  // root of k^2 + beta k + 1 with |k| < 1
};

ComplexScalar beta_from_canonical(const CanonicalForm& canonical);
// DegenerateModulusError when both roots sit on |k| = 1 or beta is not finite.
ModulusChoice modulus_from_beta(ComplexScalar beta);
ModulusChoice modulus_from_canonical(const CanonicalForm& canonical);

// F = c (f - 1)/(f + 1) and its inverse f = (c + F)/(c - F).
ComplexScalar to_canonical(ComplexScalar f, ComplexScalar c);
ComplexScalar from_canonical(ComplexScalar F, ComplexScalar c);

// The invariant curve without a phase: enough to evaluate g(z).
struct CurveModel {
  CanonicalForm canonical;
  ComplexScalar beta;
  ComplexScalar k;
  ComplexScalar A;  // principal sqrt(k)
  std::optional<elliptic::PeriodPair> lattice;  // used to reduce z before evaluating sn
};

CurveModel curve_model(ComplexScalar E0, ComplexScalar t0);

struct EllipticFit : CurveModel {
  ComplexScalar p;
  ComplexScalar z0;
  ComplexScalar quarter;                 // K(k)
  std::optional<elliptic::PeriodPair> periods;  // absent outside the series disk
  double fit_mismatch = 0.0;             // |A sn(z0 + p) - F1|
};

EllipticFit fit_phase(const CanonicalForm& canonical, ComplexScalar k, ComplexScalar f0,
                      ComplexScalar f1);

// E0 = invariant_E(f0, f1, t0, 1), then the full chain.
EllipticFit fit_from_initial(ComplexScalar f0, ComplexScalar f1, ComplexScalar t0);

// G(z) = A sn(z; k), with z first reduced to the period cell.
ComplexScalar curve_point(const CurveModel& curve, ComplexScalar z);

// g(z) = (c + G(z))/(c - G(z)); PoleProximityError when |c - G| < 1e-10.
ComplexScalar curve_value(const CurveModel& curve, ComplexScalar z);

// f(x) ~ g(z0 + p x).
ComplexScalar predict(const EllipticFit& fit, double x);

// G(z)^2 G(z+p)^2 + gamma (G(z)^2 + G(z+p)^2) + zeta G(z) G(z+p) + 1.
ComplexScalar biquadratic_residual(const EllipticFit& fit, ComplexScalar z);

// The same residual divided by (1 + |G(z)|^2)(1 + |G(z+p)|^2), which stays
// O(rounding) near poles of sn.
double scaled_biquadratic_residual(const EllipticFit& fit, ComplexScalar z);

// Canonical biquadratic evaluated on the simulated pair (F_n, F_{n+1}).
ComplexScalar residual_Kn(const Trajectory& traj, const EllipticFit& fit, std::size_t n);

// Same quantity through (c-F_n)^2 (c-F_{n+1})^2 H_n / (2 - E0 - 4 t0) with
// H_n = f_{n+1} f_n (E_n - E_0).
ComplexScalar residual_Kn_via_H(const Trajectory& traj, const EllipticFit& fit, std::size_t n);

}  // namespace qp2
