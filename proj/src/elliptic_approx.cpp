#include "qp2/elliptic_approx.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qp2/errors.hpp"

namespace qp2 {

namespace {

constexpr double kMobiusPoleTolerance = 1e-12;

std::string describe(const std::vector<DegenerateKind>& kinds) {
  std::string out;
  for (DegenerateKind kind : kinds) {
    if (!out.empty()) out += ", ";
    out += to_string(kind);
  }
  return out;
}

void require_pole_free(const Trajectory& traj, std::size_t n) {
  if (n + 1 >= traj.f.size() || n >= traj.size())
    throw PoleError(PoleFactor::product, n, "index beyond the trajectory");
  if (!traj.pole_free(n, n + 1))
    throw PoleError(PoleFactor::product, n, "trajectory is flagged at step " + std::to_string(n));
}

std::optional<elliptic::PeriodPair> lattice_or_empty(ComplexScalar k) {
  try {
    return elliptic::period_lattice(k);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

CanonicalForm canonical_transform(ComplexScalar E0, ComplexScalar t0) {
  const ComplexScalar hit_b = 2.0 + 4.0 * t0;
  const ComplexScalar hit_c = 2.0 - 4.0 * t0;
  if (std::abs(E0 - hit_b) < kCriticalE0Tolerance || std::abs(E0 - hit_c) < kCriticalE0Tolerance) {
    const std::array<std::pair<DegenerateKind, ComplexScalar>, 4> values = {{
        {DegenerateKind::K2To1_a, -2.0 - t0 * t0},
        {DegenerateKind::K2To0_a, {-2.0, 0.0}},
        {DegenerateKind::K2To0_b, hit_b},
        {DegenerateKind::K2To0_c, hit_c},
    }};
    std::vector<DegenerateKind> kinds;
    for (const auto& [kind, value] : values)
      if (std::abs(E0 - value) < kCriticalE0Tolerance) kinds.push_back(kind);
    throw CriticalPointError(kinds, "E0 sits on a critical value of the canonical transform (" +
                                        describe(kinds) + ")");
  }
  const ComplexScalar d_minus = 2.0 - E0 - 4.0 * t0;
  const ComplexScalar d_plus = 2.0 - E0 + 4.0 * t0;
  const ComplexScalar c = principal_root4(d_minus / d_plus);
  const ComplexScalar c2 = c * c;
  return {c, (2.0 + E0) * c2 / d_minus, 8.0 * c2 / d_minus, E0, t0};
}

ComplexScalar beta_from_canonical(const CanonicalForm& canonical) {
  const ComplexScalar g = canonical.gamma;
  const ComplexScalar z = canonical.zeta;
  if (std::abs(g) < std::numeric_limits<double>::min())
    throw DegenerateModulusError("gamma vanishes: modulus collapses to k = 0");
  return (4.0 + 4.0 * g * g - z * z) / (4.0 * g);
}

ModulusChoice modulus_from_beta(ComplexScalar beta) {
  if (!is_finite(beta)) throw DegenerateModulusError("beta is not finite");
  const ComplexScalar disc = principal_sqrt(beta * beta - 4.0);
  // Larger root first, the partner is its reciprocal.
  const ComplexScalar plus = -beta + disc;
  const ComplexScalar minus = -beta - disc;
  const ComplexScalar big = 0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
  const ComplexScalar k = 1.0 / big;
  if (std::abs(std::abs(k) - 1.0) < kUnitModulusTolerance)
    throw DegenerateModulusError("both modulus roots lie on |k| = 1");
  return {beta, k};
}

ModulusChoice modulus_from_canonical(const CanonicalForm& canonical) {
  return modulus_from_beta(beta_from_canonical(canonical));
}

ComplexScalar to_canonical(ComplexScalar f, ComplexScalar c) { return c * (f - 1.0) / (f + 1.0); }

ComplexScalar from_canonical(ComplexScalar F, ComplexScalar c) { return (c + F) / (c - F); }

CurveModel curve_model(ComplexScalar E0, ComplexScalar t0) {
  const CanonicalForm canonical = canonical_transform(E0, t0);
  const ModulusChoice mod = modulus_from_canonical(canonical);
  return {canonical, mod.beta, mod.k, principal_sqrt(mod.k), lattice_or_empty(mod.k)};
}

EllipticFit fit_phase(const CanonicalForm& canonical, ComplexScalar k, ComplexScalar f0,
                      ComplexScalar f1) {
  if (std::abs(f0 + 1.0) < kMobiusPoleTolerance || std::abs(f1 + 1.0) < kMobiusPoleTolerance)
    throw FitError("initial value at f = -1, the pole of the Mobius map");
  if (k == 0.0) throw DegenerateModulusError("k = 0 has no elliptic phase");

  EllipticFit fit;
  fit.canonical = canonical;
  fit.beta = beta_from_canonical(canonical);
  fit.k = k;
  fit.A = principal_sqrt(k);
  fit.lattice = lattice_or_empty(k);

  const ComplexScalar c = canonical.c;
  const ComplexScalar F0 = to_canonical(f0, c);
  const ComplexScalar F1 = to_canonical(f1, c);
  fit.quarter = elliptic::quarter_period(k);
  const ComplexScalar K = fit.quarter;

  const ComplexScalar z0 = elliptic::inverse_sn(F0 / fit.A, k);

  // k sn^2(p) = -1/gamma fixes sn(p) up to sign; cn(p) dn(p) = -zeta/(2 gamma)
  // picks between p and 2K - p.
  const ComplexScalar p1 = elliptic::inverse_sn(principal_sqrt(-1.0 / (k * canonical.gamma)), k);
  const ComplexScalar target = -canonical.zeta / (2.0 * canonical.gamma);
  const ComplexScalar p2 = 2.0 * K - p1;
  auto cndn = [&](ComplexScalar z) {
    const auto t = elliptic::jacobi_all(z, k);
    return t.cn * t.dn;
  };
  const ComplexScalar p = std::abs(cndn(p1) - target) <= std::abs(cndn(p2) - target) ? p1 : p2;

  double best = std::numeric_limits<double>::infinity();
  for (const ComplexScalar zc : {z0, 2.0 * K - z0}) {
    for (const ComplexScalar pc : {p, -p}) {
      const double miss = std::abs(fit.A * elliptic::jacobi_all(zc + pc, k).sn - F1);
      if (miss < best) {
        best = miss;
        fit.z0 = zc;
        fit.p = pc;
      }
    }
  }
  if (!(best < kFitTolerance * (1.0 + std::abs(F1))))
    throw FitError("no phase candidate reproduces f1 (mismatch " + std::to_string(best) + ")");
  fit.fit_mismatch = best;

  try {
    fit.periods = elliptic::periods(k * k);
  } catch (const ConvergenceError&) {
    fit.periods.reset();
  }
  return fit;
}

EllipticFit fit_from_initial(ComplexScalar f0, ComplexScalar f1, ComplexScalar t0) {
  const ComplexScalar E0 = invariant_E(f0, f1, t0, 1.0);
  const CanonicalForm canonical = canonical_transform(E0, t0);
  const ModulusChoice mod = modulus_from_canonical(canonical);
  return fit_phase(canonical, mod.k, f0, f1);
}

ComplexScalar curve_point(const CurveModel& curve, ComplexScalar z) {
  const ComplexScalar zr = curve.lattice ? elliptic::reduce_to_cell(z, *curve.lattice) : z;
  return curve.A * elliptic::jacobi_all(zr, curve.k).sn;
}

ComplexScalar curve_value(const CurveModel& curve, ComplexScalar z) {
  const ComplexScalar c = curve.canonical.c;
  const ComplexScalar G = curve_point(curve, z);
  if (!(std::abs(G) <= elliptic::kPoleMagnitude)) {
    // Near a pole of sn: g -> -1.
    const ComplexScalar r = c / G;
    return (r + 1.0) / (r - 1.0);
  }
  const ComplexScalar denom = c - G;
  if (std::abs(denom) < kPredictPoleTolerance)
    throw PoleProximityError("predicted value is at a pole (A sn = c)");
  return (c + G) / denom;
}

ComplexScalar predict(const EllipticFit& fit, double x) { return curve_value(fit, fit.z0 + fit.p * x); }

ComplexScalar biquadratic_residual(const EllipticFit& fit, ComplexScalar z) {
  const ComplexScalar g1 = curve_point(fit, z);
  const ComplexScalar g2 = curve_point(fit, z + fit.p);
  const ComplexScalar s1 = g1 * g1;
  const ComplexScalar s2 = g2 * g2;
  return s1 * s2 + fit.canonical.gamma * (s1 + s2) + fit.canonical.zeta * g1 * g2 + 1.0;
}

double scaled_biquadratic_residual(const EllipticFit& fit, ComplexScalar z) {
  const ComplexScalar g1 = curve_point(fit, z);
  const ComplexScalar g2 = curve_point(fit, z + fit.p);
  return std::abs(biquadratic_residual(fit, z)) / ((1.0 + std::norm(g1)) * (1.0 + std::norm(g2)));
}

ComplexScalar residual_Kn(const Trajectory& traj, const EllipticFit& fit, std::size_t n) {
  require_pole_free(traj, n);
  const ComplexScalar c = fit.canonical.c;
  const ComplexScalar Fn = to_canonical(traj.f[n], c);
  const ComplexScalar Fm = to_canonical(traj.f[n + 1], c);
  return Fm * Fm * Fn * Fn + fit.canonical.gamma * (Fm * Fm + Fn * Fn) + fit.canonical.zeta * Fm * Fn +
         1.0;
}

ComplexScalar residual_Kn_via_H(const Trajectory& traj, const EllipticFit& fit, std::size_t n) {
  require_pole_free(traj, n);
  const CanonicalForm& cf = fit.canonical;
  const ComplexScalar Fn = to_canonical(traj.f[n], cf.c);
  const ComplexScalar Fm = to_canonical(traj.f[n + 1], cf.c);
  const ComplexScalar H = traj.f[n + 1] * traj.f[n] * (traj.E[n] - cf.E0);
  const ComplexScalar an = cf.c - Fn;
  const ComplexScalar am = cf.c - Fm;
  return an * an * am * am * H / (2.0 - cf.E0 - 4.0 * cf.t0);
}

}  // namespace qp2
