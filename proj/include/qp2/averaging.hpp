#pragma once

// Slow drift of E over one near-period of the discrete elliptic flow.

#include <cstddef>
#include <functional>
#include <optional>

#include "qp2/core.hpp"
#include "qp2/elliptic_approx.hpp"
#include "qp2/elliptic_fn.hpp"

namespace qp2 {

inline constexpr double kNearPeriodThreshold = 0.25;

struct NearPeriod {
  std::size_t eta = 0;
  ComplexScalar omega;        // m1 omega1 + m2 omega2
  int m1 = 0;
  int m2 = 0;
  ComplexScalar omega_over_p;
  double mismatch = 0.0;      // |eta - omega/p|
};

// Lattice search over |m1|, |m2| <= search_depth for the period Omega whose
// ratio Omega/p is closest to a positive integer eta <= max_eta. Ties go to
// the smaller eta. NoNearPeriodError above `threshold`.
NearPeriod near_period(const EllipticFit& fit, int search_depth, std::size_t max_eta,
                       double threshold = kNearPeriodThreshold);

// Same search on an explicit lattice and step.
NearPeriod near_period(const elliptic::PeriodPair& lattice, ComplexScalar p, int search_depth,
                       std::size_t max_eta, double threshold = kNearPeriodThreshold);

// Integral of dz / (1 - (k/c^2) sn^2) over the cycle Omega starting at z0.
// Pure real-period cycles use m1 * 4 Pi(k/c^2, k).
ComplexScalar cycle_pi(const EllipticFit& fit, const NearPeriod& period,
                       const elliptic::PiOptions& options = {});

// -(t0 eps / p) ((4 + L0) Omega - 8 Pi_cycle)
ComplexScalar predicted_drift(const EllipticFit& fit, const QP2Params& params, ComplexScalar L0,
                              ComplexScalar omega, ComplexScalar pi_cycle);

ComplexScalar predicted_drift(const EllipticFit& fit, const QP2Params& params, ComplexScalar L0,
                              const NearPeriod& period, const elliptic::PiOptions& options = {});

// E_eta - E_0; PoleError when [0, eta+1] is not pole free.
ComplexScalar measured_drift(const Trajectory& traj, std::size_t eta);

double s_eta_bound(double R, ComplexScalar t0, ComplexScalar epsilon, double mismatch,
                   double omega_over_p_mag);

struct EstimateOptions {
  double step = 0.05;
  double safety = 2.0;
};

// safety * max_{k <= depth} |L^{(k)}(0)| from Richardson-extrapolated central
// differences. depth must lie in [1, 6].
double estimate_R(const std::function<ComplexScalar(double)>& L, int depth,
                  const EstimateOptions& options = {});

// L(x) = f(x) + 1/f(x) + f(x+1) + 1/f(x+1) with f the fitted prediction.
double estimate_R(const EllipticFit& fit, int depth, const EstimateOptions& options = {});

struct DriftReport {
  std::size_t eta = 0;
  ComplexScalar omega;
  int m1 = 0;
  int m2 = 0;
  ComplexScalar omega_over_p;
  double mismatch = 0.0;
  ComplexScalar predicted;
  ComplexScalar measured;
  double relative_error = 0.0;
  double s_bound = 0.0;
  double R_estimate = 0.0;
};

struct DriftOptions {
  int search_depth = 4;
  int R_depth = 4;
  double threshold = kNearPeriodThreshold;
  std::optional<double> R_override;
  elliptic::PiOptions pi{};
};

// Fit, near period, predicted and measured drift for one trajectory (a = 1).
DriftReport drift_report(const Trajectory& traj, const EllipticFit& fit, const DriftOptions& options = {});

}  // namespace qp2
