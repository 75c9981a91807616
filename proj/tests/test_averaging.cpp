#include <gtest/gtest.h>

#include <cmath>

#include "qp2/averaging.hpp"
#include "qp2/errors.hpp"

using namespace qp2;

namespace {

const double kRealF1 = (7.0 - std::sqrt(13.0)) / 6.0;

}  // namespace

TEST(NearPeriod, RealCaseFindsThree) {
  const auto fit = fit_from_initial(1.0, kRealF1, 1.0);
  const auto np = near_period(fit, 4, 10000);
  EXPECT_EQ(np.eta, 3u);
  EXPECT_EQ(np.m1, -1);
  EXPECT_EQ(np.m2, 0);
  EXPECT_LT(np.mismatch, 1e-12);
}

TEST(NearPeriod, ThresholdAndTies) {
  elliptic::PeriodPair lat{4.0, ComplexScalar(0.0, 4.0)};
  // p = 2: 4/2 = 2 and (4 + 4i)/2 is off-real, so eta = 2 from m1 = 1.
  auto np = near_period(lat, 2.0, 3, 100);
  EXPECT_EQ(np.eta, 2u);
  EXPECT_EQ(np.mismatch, 0.0);
  // p = 4 / 2.5 gives mismatch 0.5 at best.
  EXPECT_THROW(near_period(lat, 1.6, 1, 100, 0.25), NoNearPeriodError);
  try {
    near_period(lat, 1.6, 1, 100, 0.25);
  } catch (const NoNearPeriodError& e) {
    EXPECT_NEAR(e.best_mismatch(), 0.5, 1e-12);
  }
  EXPECT_THROW(near_period(lat, 0.0, 1, 100), DomainError);
}

TEST(SEtaBound, FrozenValue) {
  EXPECT_NEAR(s_eta_bound(5.0, 1.0, 1e-3, 0.1, 30.0), 0.016854077760763207, 1e-15);
  EXPECT_EQ(s_eta_bound(5.0, 1.0, 1e-3, 0.0, 30.0), 0.0);
  EXPECT_EQ(s_eta_bound(0.0, 1.0, 1e-3, 0.1, 30.0), 0.0);
}

TEST(EstimateR, Polynomial) {
  // derivatives of 3 + x^2 at 0 are 0, 2, 0, ...
  EstimateOptions opts;
  opts.safety = 1.0;
  const double r = estimate_R([](double x) { return ComplexScalar(3.0 + x * x); }, 4, opts);
  EXPECT_NEAR(r, 2.0, 1e-6);
  EXPECT_EQ(estimate_R([](double) { return ComplexScalar(4.0); }, 4), 0.0);
  const double e = estimate_R([](double x) { return std::exp(ComplexScalar(2.0 * x)); }, 3, opts);
  EXPECT_NEAR(e, 8.0, 1e-3);
  EXPECT_THROW(estimate_R([](double) { return ComplexScalar(1.0); }, 7), DomainError);
}

TEST(Drift, MeasuredMatchesDirect) {
  const auto tr = iterate(QP2Params::make(1.0, 1.0, 1e-3), 1.0, kRealF1, 10);
  EXPECT_EQ(measured_drift(tr, 3), tr.E[3] - tr.E[0]);
  EXPECT_EQ(measured_drift(tr, 0), ComplexScalar(0.0));
}

TEST(Drift, RealCasePrediction) {
  const auto fit = fit_from_initial(1.0, kRealF1, 1.0);
  double prev = 0.0;
  for (double eps : {2e-3, 1e-3, 5e-4}) {
    const auto tr = iterate(QP2Params::make(1.0, 1.0, eps), 1.0, kRealF1, 10);
    const auto rep = drift_report(tr, fit);
    EXPECT_EQ(rep.eta, 3u);
    EXPECT_NEAR(std::abs(rep.predicted - eps / 3.0), 0.0, 1e-9);
    EXPECT_LT(rep.relative_error, 0.05);
    if (prev > 0.0) EXPECT_NEAR(prev / rep.relative_error, 2.0, 0.1);
    prev = rep.relative_error;
  }
}

TEST(Drift, CyclePiRealCycle) {
  const auto fit = fit_from_initial(1.0, kRealF1, 1.0);
  const auto np = near_period(fit, 4, 10000);
  const ComplexScalar alpha2 = fit.k / (fit.canonical.c * fit.canonical.c);
  EXPECT_NEAR(std::abs(cycle_pi(fit, np) + 4.0 * elliptic::complete_pi(alpha2, fit.k)), 0.0, 1e-12);
}

TEST(EstimateR, RealCaseStableUnderStepHalving) {
  const auto fit = fit_from_initial(1.0, kRealF1, 1.0);
  EstimateOptions coarse;
  EstimateOptions fine;
  fine.step = 0.5 * coarse.step;
  const double a = estimate_R(fit, 4, coarse);
  const double b = estimate_R(fit, 4, fine);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(std::abs(a - b) / a, 0.1);
}

TEST(Drift, PredictionLinearInEpsilonAndT0) {
  const auto fit = fit_from_initial(1.0, kRealF1, 1.0);
  const auto np = near_period(fit, 4, 10000);
  const ComplexScalar pi = cycle_pi(fit, np);
  const ComplexScalar base = predicted_drift(fit, QP2Params::make(1.0, 1.0, 1e-3), 4.0, np.omega, pi);
  const ComplexScalar twice = predicted_drift(fit, QP2Params::make(1.0, 1.0, 2e-3), 4.0, np.omega, pi);
  const ComplexScalar rotated = predicted_drift(fit, QP2Params::make(1.0, kI, 1e-3), 4.0, np.omega, pi);
  EXPECT_NEAR(std::abs(twice - 2.0 * base), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rotated - kI * base), 0.0, 1e-15);
}
