#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qp2/core.hpp"
#include "qp2/errors.hpp"

using namespace qp2;

namespace {

const double kSqrt13 = std::sqrt(13.0);
const double kRealF1 = (7.0 - kSqrt13) / 6.0;

Trajectory real_case(double eps, std::size_t steps) {
  return iterate(QP2Params::make(1.0, 1.0, eps), 1.0, kRealF1, steps);
}

}  // namespace

TEST(Params, RejectsInvalid) {
  EXPECT_THROW(QP2Params::make(0.0, 1.0, 1e-3), DomainError);
  EXPECT_THROW(QP2Params::make(1.0, 0.0, 1e-3), DomainError);
  EXPECT_THROW(QP2Params::make(1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(QP2Params::make(1.0, 1.0, 1.0), DomainError);
  const auto p = QP2Params::make(1.0, 1.0, ComplexScalar(1e-3, 2e-3));
  EXPECT_EQ(p.q(), 1.0 + ComplexScalar(1e-3, 2e-3));
}

TEST(Step, Examples) {
  EXPECT_EQ(step(1.0, 1.0, 0.7, 1.0), ComplexScalar(1.0));
  EXPECT_EQ(step(-1.0, -1.0, 0.7, 1.0), ComplexScalar(-1.0));
  EXPECT_NEAR(std::abs(step(2.0, 1.0, 1.0, 1.0) - 0.5), 0.0, 1e-15);
  EXPECT_THROW(step(0.0, 1.0, 1.0, 1.0), PoleError);
  try {
    step(1.0, 1.0, -1.0, 1.0);
    FAIL();
  } catch (const PoleError& e) {
    EXPECT_EQ(e.factor(), PoleFactor::f_n_plus_t);
  }
}

TEST(Invariant, Examples) {
  EXPECT_NEAR(std::abs(invariant_E(1.0, 1.0, 1.0, 1.0) - 6.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(invariant_E(-1.0, -1.0, 1.0, 1.0) + 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(invariant_E(1.0, kRealF1, 1.0, 1.0) - 20.0 / 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(quantity_L(1.0, 1.0, 1.0) - 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(quantity_L(-1.0, -1.0, 1.0) + 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(quantity_L(2.0, 0.5, 1.0) - 5.0), 0.0, 1e-15);
}

TEST(Bounds, ErrorBoundValues) {
  EXPECT_EQ(error_bound_E(0, 1.0, 1e-3, 4.0), 0.0);
  EXPECT_NEAR(error_bound_E(1000, 1.0, 1e-3, 4.0), 13.746254627672362, 1e-12);
  EXPECT_NEAR(expm1_minus_x(1e-3), 5.0016670834166807e-07, 1e-20);
  EXPECT_NEAR(expm1_minus_x(0.5), std::exp(0.5) - 1.5, 1e-15);
}

TEST(SolveF1, Examples) {
  auto r = solve_f1_from_E0(6.0, 1.0, 1.0, 1.0);
  EXPECT_NEAR(std::abs(r.first - 1.0), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(r.second - 1.0), 0.0, 1e-7);

  r = solve_f1_from_E0(20.0 / 3.0, 1.0, 1.0, 1.0);
  EXPECT_NEAR(r.first.real(), kRealF1, 1e-14);
  EXPECT_NEAR(r.second.real(), (7.0 + kSqrt13) / 6.0, 1e-14);

  const double t0 = -std::sqrt(2.0);
  r = solve_f1_from_E0(-1.4, 1.0, t0, 1.0);
  EXPECT_NEAR(std::abs(invariant_E(1.0, r.first, t0, 1.0) + 1.4), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(invariant_E(1.0, r.second, t0, 1.0) + 1.4), 0.0, 1e-10);
  EXPECT_LE(std::abs(r.first), std::abs(r.second));
  EXPECT_NEAR(r.first.real(), -0.31959806618641206, 1e-13);
  EXPECT_NEAR(r.second.real(), -3.1289300712374452, 1e-13);

  EXPECT_THROW(solve_f1_from_E0(1.0, 1.0, -1.0, 1.0), DegenerateError);
}

TEST(Iterate, Stationary) {
  for (double s : {1.0, -1.0}) {
    const auto tr = iterate(QP2Params::make(1.0, 1.0, 1e-3), s, s, 100);
    ASSERT_EQ(tr.f.size(), 101u);
    ASSERT_EQ(tr.size(), 100u);
    for (std::size_t n = 0; n <= 100; ++n) EXPECT_EQ(tr.f[n], ComplexScalar(s));
    for (std::size_t n = 0; n < 100; ++n) EXPECT_NEAR(std::abs(tr.E[n] - (s > 0 ? 6.0 : -2.0)), 0.0, 1e-13);
  }
}

TEST(Iterate, RealCaseShape) {
  const auto tr = real_case(1e-3, 4000);
  EXPECT_EQ(tr.f.size(), 4001u);
  EXPECT_NEAR(std::abs(tr.E[0] - 20.0 / 3.0), 0.0, 1e-12);
  for (std::size_t n = 1; n < tr.size(); ++n) EXPECT_GE(tr.J[n], tr.J[n - 1]);
  // t by repeated multiplication stays close to t0 q^n
  const ComplexScalar exact = std::pow(ComplexScalar(1.001), 4000);
  EXPECT_LT(std::abs(tr.t[4000] - exact) / std::abs(exact), 4000 * 1e-12);
}

TEST(Iterate, PoleModes) {
  // f1 = -t1 makes f_1 + t_1 vanish at the first step.
  const auto params = QP2Params::make(1.0, 1.0, 1e-3);
  const ComplexScalar f1 = -params.t0() * params.q();
  EXPECT_THROW(iterate(params, 1.0, f1, 10), PoleError);

  const auto tr = iterate(params, 1.0, f1, 10, {PoleMode::truncate});
  ASSERT_TRUE(tr.truncated_at.has_value());
  EXPECT_EQ(*tr.truncated_at, 1u);

  const auto sk = iterate(params, 1.0, f1, 10, {PoleMode::skip});
  EXPECT_FALSE(sk.truncated_at.has_value());
  EXPECT_EQ(sk.f.size(), 11u);
  EXPECT_EQ(sk.pole_flags[2], 1);
  EXPECT_FALSE(sk.pole_free(0, 3));
  EXPECT_TRUE(sk.pole_free(0, 1));
}

TEST(Iterate, RejectsZeroInitialData) {
  const auto params = QP2Params::make(1.0, 1.0, 1e-3);
  EXPECT_THROW(iterate(params, 0.0, 1.0, 10), DomainError);
  EXPECT_THROW(iterate(params, 1.0, 0.0, 10), DomainError);
}

TEST(Bounds, RealCase) {
  const auto tr = real_case(1e-3, 4000);
  for (std::size_t n = 1; n < tr.size(); ++n)
    ASSERT_LT(std::abs(tr.E[n] - tr.E[0]), error_bound_E(n, 1.0, 1e-3, tr.J[n])) << "n=" << n;
  const auto fod = first_order_drift(tr, 500);
  EXPECT_LT(std::abs(tr.E[500] - tr.E[0] - fod.drift), fod.M_bound);
  const auto zero = first_order_drift(tr, 0);
  EXPECT_EQ(zero.drift, ComplexScalar(0.0));
  EXPECT_EQ(zero.M_bound, 0.0);
}

TEST(Bounds, DriftSeriesMatchesPointwise) {
  const auto tr = real_case(1e-3, 300);
  const auto series = first_order_drift_series(tr);
  ASSERT_EQ(series.size(), tr.size());
  for (std::size_t n : {1u, 7u, 150u, 299u}) {
    const auto one = first_order_drift(tr, n);
    EXPECT_NEAR(std::abs(series[n].drift - one.drift), 0.0, 1e-12 * (1.0 + std::abs(one.drift)));
    EXPECT_NEAR(series[n].M_bound, one.M_bound, 1e-15 * (1.0 + one.M_bound));
  }
}

TEST(Bounds, StationaryDriftIsZero) {
  const auto tr = iterate(QP2Params::make(1.0, 1.0, 1e-3), 1.0, 1.0, 50);
  const auto fod = first_order_drift(tr, 40);
  EXPECT_NEAR(std::abs(fod.drift), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(tr.E[40] - tr.E[0]), 0.0, 1e-15);
}

TEST(Identity, DifferenceOfE) {
  const auto tr = real_case(1e-3, 2000);
  for (std::size_t n = 1; n < tr.size(); ++n) {
    const ComplexScalar lhs = tr.E[n] - tr.E[n - 1];
    const ComplexScalar rhs = -(tr.t[n] - tr.t[0]) * (tr.L[n] - tr.L[n - 1]);
    ASSERT_LT(std::abs(lhs - rhs), 1e-10 * (std::abs(tr.E[n]) + std::abs(tr.E[n - 1]))) << n;
  }
}

TEST(Scaling, HalvingEpsilonHalvesDrift) {
  for (std::size_t steps : {20u, 50u, 100u}) {
    const auto a = real_case(1e-3, steps);
    const auto b = real_case(5e-4, steps);
    double da = 0.0;
    double db = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
      da = std::max(da, std::abs(a.E[n] - a.E[0]));
      db = std::max(db, std::abs(b.E[n] - b.E[0]));
    }
    EXPECT_NEAR(da / db, 2.0, 0.2) << steps;
  }
}

TEST(Bounds, RandomComplexConfigurations) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto polar = [&](double lo, double hi) { return std::polar(lo + (hi - lo) * u(rng), 2.0 * M_PI * u(rng)); };
  int checked = 0;
  while (checked < 20) {
    const ComplexScalar eps = std::polar(std::pow(10.0, -4.0 + 2.0 * u(rng)), 2.0 * M_PI * u(rng));
    const auto steps = static_cast<std::size_t>(0.5 / std::abs(eps));
    try {
      const auto tr = iterate(QP2Params::make(polar(0.5, 2.0), polar(0.2, 2.0), eps), polar(0.3, 3.0),
                              polar(0.3, 3.0), steps);
      const auto series = first_order_drift_series(tr);
      for (std::size_t n = 1; n < tr.size(); ++n) {
        const double dE = std::abs(tr.E[n] - tr.E[0]);
        ASSERT_LT(dE, error_bound_E(n, tr.params.t0(), eps, tr.J[n]));
        if (n >= 2) ASSERT_LT(std::abs(tr.E[n] - tr.E[0] - series[n].drift), series[n].M_bound);
      }
      ++checked;
    } catch (const PoleError&) {
    }
  }
}
