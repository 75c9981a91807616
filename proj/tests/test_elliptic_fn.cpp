#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qp2/elliptic_fn.hpp"
#include "qp2/errors.hpp"

using namespace qp2;
using namespace qp2::elliptic;

namespace {

double rel(ComplexScalar a, ComplexScalar b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const ComplexScalar kModuli[] = {{0.36, 0.0}, {0.3, 0.4}, {0.0, 0.9}, {-0.5, 0.2}, {0.8, -0.3}, {0.0, -0.0747637058}};

}  // namespace

TEST(HSeries, FrozenValues) {
  EXPECT_NEAR(std::abs(h_series(0.0) - kPi), 0.0, 1e-15);
  EXPECT_NEAR(h_series(0.5).real(), 3.7081493546027438, 1e-13);
  EXPECT_NEAR(h_series(0.25).real(), 3.3715007096251921, 1e-13);
  EXPECT_NEAR(h_series(0.75).real(), 4.3130312949992865, 1e-12);
  EXPECT_THROW(h_series(0.99), ConvergenceError);
}

TEST(HSeries, MatchesQuadratureOracle) {
  for (ComplexScalar m : {ComplexScalar(0.3, 0.4), ComplexScalar(-0.6, 0.1), ComplexScalar(0.0, -0.8)})
    EXPECT_LT(rel(h_series(m), 2.0 * oracle::first_kind(m)), 1e-11) << m;
}

TEST(QuarterPeriod, AgreesAcrossRoutes) {
  EXPECT_NEAR(quarter_period(0.36).real(), 1.6257712374218943, 1e-13);
  // |m| > 0.95 forces quadrature
  const ComplexScalar k(0.2, 0.98);
  EXPECT_LT(rel(quarter_period(k), oracle::first_kind(k * k)), 1e-9);
}

TEST(Periods, SeriesPair) {
  const auto pp = periods(0.5);
  EXPECT_NEAR(pp.omega1.real(), 2.0 * 3.7081493546027438, 1e-12);
  EXPECT_NEAR(pp.omega2.imag(), 3.7081493546027438, 1e-12);
  EXPECT_THROW(periods(0.99), ConvergenceError);
}

TEST(Jacobi, SpecialValues) {
  const auto t = jacobi_all(0.0, ComplexScalar(0.3, 0.4));
  EXPECT_EQ(t.sn, ComplexScalar(0.0));
  EXPECT_NEAR(std::abs(t.cn - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.dn - 1.0), 0.0, 1e-15);
  // k -> 0 is sin
  const ComplexScalar z(0.7, 0.2);
  EXPECT_NEAR(std::abs(jacobi_sn(z, 0.0) - std::sin(z)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(jacobi_sn(quarter_period(0.36), 0.36) - 1.0), 0.0, 1e-12);
  EXPECT_THROW(jacobi_all(z, 1.0), DomainError);
}

TEST(Jacobi, Degenerations) {
  for (int i = 0; i < 20; ++i) {
    const ComplexScalar z(-2.0 + 0.2 * i, 0.15 * ((i % 7) - 3));
    EXPECT_NEAR(std::abs(jacobi_sn(z, 0.0) - std::sin(z)), 0.0, 1e-12);
    const auto [cn, dn] = jacobi_cn_dn(z, 0.0);
    EXPECT_NEAR(std::abs(cn - std::cos(z)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(dn - 1.0), 0.0, 1e-12);
  }
  for (int i = 0; i <= 40; ++i) {
    const double x = -2.0 + 0.1 * i;
    EXPECT_NEAR(std::abs(jacobi_sn(x, 1.0 - 1e-9) - std::tanh(x)), 0.0, 1e-6);
  }
}

TEST(Jacobi, DegenerationRates) {
  // O(k^2) towards sin and O(1 - k) towards tanh
  auto gap = [](ComplexScalar k, bool to_sin) {
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double x = -1.0 + 0.2 * i;
      worst = std::max(worst, std::abs(jacobi_sn(x, k) - (to_sin ? std::sin(x) : std::tanh(x))));
    }
    return worst;
  };
  EXPECT_NEAR(gap(0.02, true) / gap(0.01, true), 4.0, 0.1);
  EXPECT_NEAR(gap(1.0 - 2e-3, false) / gap(1.0 - 1e-3, false), 2.0, 0.1);
}

TEST(Jacobi, AdditionFormula) {
  for (int i = 0; i < 50; ++i) {
    const ComplexScalar k = std::polar(0.9 * (i + 0.5) / 50.0, 0.37 * i);
    const ComplexScalar x(0.1 + 0.013 * i, 0.2 - 0.007 * i);
    const ComplexScalar y(-0.3 + 0.011 * i, 0.05 * std::sin(1.0 * i));
    const auto a = jacobi_all(x, k);
    const auto b = jacobi_all(y, k);
    const ComplexScalar rhs = (a.sn * b.cn * b.dn + b.sn * a.cn * a.dn) / (1.0 - k * k * a.sn * a.sn * b.sn * b.sn);
    EXPECT_LT(std::abs(jacobi_sn(x + y, k) - rhs), 1e-9) << i;
  }
}

TEST(Jacobi, MatchesOdeOracle) {
  for (ComplexScalar k : kModuli) {
    for (ComplexScalar z : {ComplexScalar(0.4, 0.1), ComplexScalar(-0.9, 0.3), ComplexScalar(0.2, -0.5)}) {
      const auto ref = oracle::jacobi_ode(z, k);
      const auto got = jacobi_all(z, k);
      EXPECT_LT(rel(got.sn, ref.sn), 1e-11) << "k=" << k << " z=" << z;
      EXPECT_LT(rel(got.cn, ref.cn), 1e-11);
      EXPECT_LT(rel(got.dn, ref.dn), 1e-11);
    }
  }
}

TEST(Jacobi, Identities) {
  for (ComplexScalar k : kModuli) {
    for (ComplexScalar z : {ComplexScalar(1.3, 0.4), ComplexScalar(-2.1, 0.7), ComplexScalar(0.5, -1.1)}) {
      const auto t = jacobi_all(z, k);
      EXPECT_NEAR(std::abs(t.sn * t.sn + t.cn * t.cn - 1.0), 0.0, 1e-11);
      EXPECT_NEAR(std::abs(k * k * t.sn * t.sn + t.dn * t.dn - 1.0), 0.0, 1e-11);
    }
  }
}

TEST(Jacobi, PoleProximity) {
  const ComplexScalar k = 0.36;
  const auto lat = period_lattice(k);
  const ComplexScalar pole = 0.5 * lat.omega2;  // i K'
  EXPECT_THROW(jacobi_sn(pole, k), PoleProximityError);
  EXPECT_THROW(jacobi_cn_dn(pole, k), PoleProximityError);
}

TEST(Lattice, IsPeriodic) {
  for (ComplexScalar k : kModuli) {
    const auto lat = period_lattice(k);
    EXPECT_GT(std::abs((lat.omega2 / lat.omega1).imag()), 1e-3);
    const ComplexScalar z(0.27, 0.13);
    const ComplexScalar s = jacobi_sn(z, k);
    EXPECT_LT(rel(jacobi_sn(z + lat.omega1, k), s), 1e-9) << k;
    EXPECT_LT(rel(jacobi_sn(z + lat.omega2, k), s), 1e-9) << k;
    EXPECT_LT(rel(lat.omega1, 4.0 * oracle::first_kind(k * k)), 1e-10) << k;
  }
}

TEST(Lattice, ReduceToCell) {
  const auto lat = period_lattice(ComplexScalar(0.3, 0.4));
  const ComplexScalar z(0.2, 0.1);
  const ComplexScalar far = z + 3.0 * lat.omega1 - 2.0 * lat.omega2;
  EXPECT_NEAR(std::abs(reduce_to_cell(far, lat) - z), 0.0, 1e-12);
}

TEST(InverseSn, RoundTrip) {
  for (ComplexScalar k : kModuli) {
    for (ComplexScalar w : {ComplexScalar(0.3, 0.2), ComplexScalar(-0.7, 0.1), ComplexScalar(1.5, -0.4)}) {
      const ComplexScalar z = inverse_sn(w, k);
      EXPECT_LT(std::abs(jacobi_sn(z, k) - w), 1e-10) << "k=" << k << " w=" << w;
    }
  }
}

TEST(InverseSn, BranchPoint) {
  EXPECT_THROW(inverse_sn(2.0, 0.36), BranchError);
}

TEST(CompletePi, FrozenAndOracle) {
  EXPECT_NEAR(complete_pi(0.25, 0.36).real(), 1.8819635383664668, 1e-12);
  EXPECT_NEAR(complete_pi(0.0, 0.0).real(), kPi / 2.0, 1e-13);
  // Pi(alpha2, 0) = pi / (2 sqrt(1 - alpha2))
  EXPECT_NEAR(complete_pi(0.5, 0.0).real(), 2.2214414690791831, 1e-12);
  const ComplexScalar k(0.3, 0.4);
  const ComplexScalar alpha2(0.4, -0.6);
  EXPECT_LT(rel(complete_pi(alpha2, k), oracle::third_kind(alpha2, k * k)), 1e-10);
}

TEST(CompletePi, PoleOnContour) {
  EXPECT_THROW(complete_pi(4.0, 0.36), ContourError);
  PiOptions opts;
  opts.deform_contour = true;
  const ComplexScalar v = complete_pi(4.0, 0.36, opts);
  opts.deformation_radius = 1e-3;
  const ComplexScalar w = complete_pi(4.0, 0.36, opts);
  EXPECT_NEAR(std::abs(v - w), 0.0, 1e-8);
  // half residue at u = 1/2
  const double half_residue = kPi / (4.0 * std::sqrt(0.75 * (1.0 - 0.36 * 0.36 * 0.25)));
  EXPECT_NEAR(std::abs(v.imag()), half_residue, 1e-8);
}

TEST(CycleThirdKind, MatchesCompletePi) {
  for (ComplexScalar k : {ComplexScalar(0.36), ComplexScalar(0.3, 0.4)}) {
    const ComplexScalar alpha2 = ComplexScalar(0.2, 0.1);
    const ComplexScalar K = quarter_period(k);
    const ComplexScalar cyc = cycle_third_kind(alpha2, k, ComplexScalar(0.0, 0.05), 4.0 * K);
    EXPECT_LT(rel(cyc, 4.0 * complete_pi(alpha2, k)), 1e-9) << k;
  }
}
