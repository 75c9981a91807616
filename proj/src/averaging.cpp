#include "qp2/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qp2/errors.hpp"

namespace qp2 {

namespace {

// k-th central difference of fn at 0 with spacing h.
ComplexScalar central_difference(const std::function<ComplexScalar(double)>& fn, int k, double h) {
  ComplexScalar sum{0.0, 0.0};
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double x = (0.5 * k - j) * h;
    sum += ((j % 2) ? -binom : binom) * fn(x);
    binom = binom * (k - j) / (j + 1);
  }
  return sum / std::pow(h, k);
}

}  // namespace

NearPeriod near_period(const elliptic::PeriodPair& lattice, ComplexScalar p, int search_depth,
                       std::size_t max_eta, double threshold) {
  if (p == 0.0) throw DomainError("near_period needs a nonzero step p");
  if (search_depth < 1) throw DomainError("search depth must be positive");

  NearPeriod best;
  best.mismatch = std::numeric_limits<double>::infinity();
  for (int m1 = -search_depth; m1 <= search_depth; ++m1) {
    for (int m2 = -search_depth; m2 <= search_depth; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      const ComplexScalar omega = static_cast<double>(m1) * lattice.omega1 +
                                  static_cast<double>(m2) * lattice.omega2;
      const ComplexScalar ratio = omega / p;
      const double rounded = std::round(ratio.real());
      if (rounded < 1.0 || rounded > static_cast<double>(max_eta)) continue;
      const auto eta = static_cast<std::size_t>(rounded);
      const double mismatch = std::abs(rounded - ratio);
      if (mismatch < best.mismatch || (mismatch == best.mismatch && eta < best.eta))
        best = {eta, omega, m1, m2, ratio, mismatch};
    }
  }
  if (!(best.mismatch <= threshold))
    throw NoNearPeriodError(best.mismatch, "no lattice period within mismatch " + std::to_string(threshold) +
                                               " of an integer multiple of p (best " +
                                               std::to_string(best.mismatch) + ")");
  return best;
}

NearPeriod near_period(const EllipticFit& fit, int search_depth, std::size_t max_eta, double threshold) {
  const elliptic::PeriodPair lattice = fit.lattice ? *fit.lattice : elliptic::period_lattice(fit.k);
  return near_period(lattice, fit.p, search_depth, max_eta, threshold);
}

ComplexScalar cycle_pi(const EllipticFit& fit, const NearPeriod& period, const elliptic::PiOptions& options) {
  const ComplexScalar c = fit.canonical.c;
  const ComplexScalar alpha2 = fit.k / (c * c);
  if (period.m2 == 0)
    return static_cast<double>(period.m1) * 4.0 * elliptic::complete_pi(alpha2, fit.k, options);
  return elliptic::cycle_third_kind(alpha2, fit.k, fit.z0, period.omega, options.quadrature);
}

ComplexScalar predicted_drift(const EllipticFit& fit, const QP2Params& params, ComplexScalar L0,
                              ComplexScalar omega, ComplexScalar pi_cycle) {
  return -(params.t0() * params.epsilon() / fit.p) * ((4.0 + L0) * omega - 8.0 * pi_cycle);
}

ComplexScalar predicted_drift(const EllipticFit& fit, const QP2Params& params, ComplexScalar L0,
                              const NearPeriod& period, const elliptic::PiOptions& options) {
  return predicted_drift(fit, params, L0, period.omega, cycle_pi(fit, period, options));
}

ComplexScalar measured_drift(const Trajectory& traj, std::size_t eta) {
  if (eta == 0) return {0.0, 0.0};
  if (eta >= traj.size() || !traj.pole_free(0, eta + 1))
    throw PoleError(PoleFactor::product, eta, "trajectory is not pole free up to eta + 1");
  return traj.E[eta] - traj.E[0];
}

double s_eta_bound(double R, ComplexScalar t0, ComplexScalar epsilon, double mismatch,
                   double omega_over_p_mag) {
  const double grow = std::expm1(mismatch);
  return R * std::abs(t0 * epsilon) * (mismatch * std::exp(mismatch) + (omega_over_p_mag + 1.0) * grow);
}

double estimate_R(const std::function<ComplexScalar(double)>& L, int depth, const EstimateOptions& options) {
  if (depth < 1 || depth > 6) throw DomainError("estimate_R depth must be in [1, 6]");
  const double h = options.step;
  double largest = 0.0;
  for (int k = 1; k <= depth; ++k) {
    const ComplexScalar coarse = central_difference(L, k, h);
    const ComplexScalar fine = central_difference(L, k, 0.5 * h);
    largest = std::max(largest, std::abs((4.0 * fine - coarse) / 3.0));
  }
  return options.safety * largest;
}

double estimate_R(const EllipticFit& fit, int depth, const EstimateOptions& options) {
  auto L = [&fit](double x) {
    const ComplexScalar f = predict(fit, x);
    const ComplexScalar g = predict(fit, x + 1.0);
    return f + 1.0 / f + g + 1.0 / g;
  };
  return estimate_R(L, depth, options);
}

DriftReport drift_report(const Trajectory& traj, const EllipticFit& fit, const DriftOptions& options) {
  const QP2Params& params = traj.params;
  const double eps = std::abs(params.epsilon());
  const auto max_eta = static_cast<std::size_t>(std::floor(10.0 / eps));
  const NearPeriod period = near_period(fit, options.search_depth, max_eta, options.threshold);

  DriftReport report;
  report.eta = period.eta;
  report.omega = period.omega;
  report.m1 = period.m1;
  report.m2 = period.m2;
  report.omega_over_p = period.omega_over_p;
  report.mismatch = period.mismatch;
  report.predicted = predicted_drift(fit, params, traj.L.at(0), period, options.pi);
  report.measured = measured_drift(traj, period.eta);
  report.relative_error = std::abs(report.measured - report.predicted) / std::abs(report.predicted);
  report.R_estimate = options.R_override ? *options.R_override : estimate_R(fit, options.R_depth);
  report.s_bound = s_eta_bound(report.R_estimate, params.t0(), params.epsilon(), period.mismatch,
                               std::abs(period.omega_over_p));
  return report;
}

}  // namespace qp2
