#include "qp2/elliptic_fn.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qp2/errors.hpp"

namespace qp2::elliptic {

namespace {

constexpr double kLandenClosure = 1e-8;
constexpr int kMaxLandenLevels = 64;
constexpr long kMaxSeriesTerms = 1'000'000;

// 1 - sin(theta), accurate near theta = pi/2.
double one_minus_sin(double theta) {
  const double s = std::sin(0.25 * kPi - 0.5 * theta);
  return 2.0 * s * s;
}

// 1 - a sin(theta) written to keep precision when a is close to 1.
ComplexScalar linear_factor(ComplexScalar a, double s, double oms) {
  return oms + s * (1.0 - a);
}

// Distance from the origin to the segment {1 - a s : s in [0, 1]} and the
// parameter of the closest point.
std::pair<double, double> segment_clearance(ComplexScalar a) {
  const double norm = std::norm(a);
  if (norm == 0.0) return {1.0, 0.0};
  const double s = std::clamp(a.real() / norm, 0.0, 1.0);
  return {std::abs(1.0 - a * s), s};
}

// BranchError if 1 - a u vanishes strictly inside u in [0, 1); a zero at the
// endpoint u = 1 is absorbed by the u = sin(theta) substitution.
void check_branch_clearance(ComplexScalar a, double clearance, const char* what) {
  const auto [dist, s] = segment_clearance(a);
  if (dist >= clearance) return;
  if (std::abs(1.0 - a) < clearance) return;
  throw BranchError(std::string(what) + ": integration path passes within " +
                    std::to_string(dist) + " of a branch point (u = " + std::to_string(s) + ")");
}

ComplexScalar first_kind_quadrature(ComplexScalar k, const QuadratureOptions& opts) {
  auto integrand = [k](double theta) {
    const double s = std::sin(theta);
    const double oms = one_minus_sin(theta);
    return 1.0 / (principal_sqrt(linear_factor(k, s, oms)) *
                  principal_sqrt(linear_factor(-k, s, oms)));
  };
  return integrate(integrand, 0.0, 0.5 * kPi, opts).value;
}

}  // namespace

ComplexScalar h_series(ComplexScalar m, double margin) {
  if (!(std::abs(m) <= 1.0 - margin))
    throw ConvergenceError("h_series: |m| = " + std::to_string(std::abs(m)) +
                           " outside the convergence margin; use the m -> 1-m relation");
  ComplexScalar term{kPi, 0.0};
  ComplexScalar sum{0.0, 0.0};
  for (long j = 0; j < kMaxSeriesTerms; ++j) {
    sum += term;
    const double ratio = (static_cast<double>(j) + 0.5) / (static_cast<double>(j) + 1.0);
    term *= m * (ratio * ratio);
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum + term;
  }
  throw ConvergenceError("h_series: term budget exhausted");
}

PeriodPair periods(ComplexScalar m) {
  return {2.0 * h_series(m), kI * h_series(1.0 - m)};
}

ComplexScalar quarter_period(ComplexScalar k) {
  const ComplexScalar m = k * k;
  if (std::abs(m) <= 1.0 - kSeriesMargin) return 0.5 * h_series(m);
  check_branch_clearance(k, 1e-8, "quarter_period");
  check_branch_clearance(-k, 1e-8, "quarter_period");
  return first_kind_quadrature(k, {});
}

namespace {

// K as a function of the parameter m.
ComplexScalar quarter_from_m(ComplexScalar m) {
  if (std::abs(m) <= 1.0 - kSeriesMargin) return 0.5 * h_series(m);
  return quarter_period(principal_sqrt(m));
}

bool is_period(ComplexScalar omega, ComplexScalar k) {
  if (!is_finite(omega) || std::abs(omega) < 1e-6) return false;
  for (const ComplexScalar z : {ComplexScalar{0.31, 0.17}, ComplexScalar{-0.23, 0.41}}) {
    const ComplexScalar a = jacobi_all(z, k).sn;
    const ComplexScalar b = jacobi_all(z + omega, k).sn;
    if (!(std::abs(a - b) < 1e-8 * (1.0 + std::abs(a)))) return false;
  }
  return true;
}

}  // namespace

PeriodPair period_lattice(ComplexScalar k) {
  const ComplexScalar m = k * k;
  const ComplexScalar mc = 1.0 - m;
  const ComplexScalar omega1 = 4.0 * quarter_from_m(m);

  // Candidates for 2i K'; the first one that is numerically a period wins.
  std::vector<std::function<ComplexScalar()>> candidates;
  candidates.emplace_back([&] { return kI * h_series(mc); });
  candidates.emplace_back([&] {
    // K(mc) = (K(1/mc) -+ i K(1 - 1/mc)) / sqrt(mc)
    const ComplexScalar inv = 1.0 / mc;
    return 2.0 * kI * (quarter_from_m(inv) - kI * quarter_from_m(1.0 - inv)) / principal_sqrt(mc);
  });
  candidates.emplace_back([&] {
    const ComplexScalar inv = 1.0 / mc;
    return 2.0 * kI * (quarter_from_m(inv) + kI * quarter_from_m(1.0 - inv)) / principal_sqrt(mc);
  });
  candidates.emplace_back([&] { return 2.0 * kI * quarter_period(principal_sqrt(mc)); });

  if (!is_period(omega1, k)) throw ConvergenceError("period_lattice: 4K failed the periodicity check");
  for (const auto& candidate : candidates) {
    try {
      const ComplexScalar omega2 = candidate();
      const ComplexScalar ratio = omega2 / omega1;
      if (std::abs(ratio.imag()) > 1e-6 && is_period(omega2, k)) return {omega1, omega2};
    } catch (const Error&) {
    }
  }
  throw ConvergenceError("period_lattice: no second period passed the periodicity check");
}

ComplexScalar reduce_to_cell(ComplexScalar z, const PeriodPair& lattice) {
  const ComplexScalar w1 = lattice.omega1;
  const ComplexScalar w2 = lattice.omega2;
  const double det = w1.real() * w2.imag() - w1.imag() * w2.real();
  if (det == 0.0) return z;
  const double a = (z.real() * w2.imag() - z.imag() * w2.real()) / det;
  const double b = (w1.real() * z.imag() - w1.imag() * z.real()) / det;
  return z - std::round(a) * w1 - std::round(b) * w2;
}

JacobiTriple jacobi_all(ComplexScalar z, ComplexScalar k) {
  const ComplexScalar m = k * k;
  if ((1.0 - k) * (1.0 + k) == 0.0)
    throw DomainError("jacobi functions need k != +-1 (hyperbolic limit)");

  std::array<ComplexScalar, kMaxLandenLevels> chain{};
  int levels = 0;
  ComplexScalar kc = k;
  ComplexScalar zc = z;
  while (std::abs(kc) > kLandenClosure) {
    if (levels == kMaxLandenLevels)
      throw ConvergenceError("Landen descent did not reduce the modulus");
    const ComplexScalar kprime = principal_sqrt((1.0 - kc) * (1.0 + kc));
    const ComplexScalar next = (1.0 - kprime) / (1.0 + kprime);
    if (!(std::abs(next) < 1.0))
      throw ConvergenceError("Landen descent stalled: complementary modulus on the imaginary axis");
    chain[levels++] = next;
    zc /= (1.0 + next);
    kc = next;
  }

  // sin/cos closure with the O(k^2) correction.
  const ComplexScalar mc = kc * kc;
  const ComplexScalar s = std::sin(zc);
  const ComplexScalar c = std::cos(zc);
  const ComplexScalar corr = 0.25 * mc * (zc - s * c);
  ComplexScalar sn = s - corr * c;
  ComplexScalar cn = c + corr * s;
  ComplexScalar dn = 1.0 - 0.5 * mc * s * s;

  for (int i = levels - 1; i >= 0; --i) {
    const ComplexScalar k1 = chain[i];
    const ComplexScalar ks2 = k1 * sn * sn;
    const ComplexScalar denom = 1.0 + ks2;
    const ComplexScalar sn_up = (1.0 + k1) * sn / denom;
    const ComplexScalar cn_up = cn * dn / denom;
    const ComplexScalar dn_up = (1.0 - ks2) / denom;
    sn = sn_up;
    cn = cn_up;
    dn = dn_up;
  }
  (void)m;
  return {sn, cn, dn};
}

ComplexScalar jacobi_sn(ComplexScalar z, ComplexScalar k) {
  const ComplexScalar sn = jacobi_all(z, k).sn;
  if (!(std::abs(sn) <= kPoleMagnitude))
    throw PoleProximityError("sn(z; k) is within pole proximity (|sn| > 1e8)");
  return sn;
}

std::pair<ComplexScalar, ComplexScalar> jacobi_cn_dn(ComplexScalar z, ComplexScalar k) {
  const JacobiTriple t = jacobi_all(z, k);
  if (!(std::abs(t.sn) <= kPoleMagnitude))
    throw PoleProximityError("cn/dn evaluated within pole proximity (|sn| > 1e8)");
  return {t.cn, t.dn};
}

ComplexScalar inverse_sn(ComplexScalar w, ComplexScalar k, const PathOptions& options) {
  if (w == 0.0) return {0.0, 0.0};
  if ((1.0 - k) * (1.0 + k) == 0.0) throw DomainError("inverse_sn needs k != +-1");
  const std::array<ComplexScalar, 4> slopes = {w, -w, k * w, -k * w};
  for (const ComplexScalar& a : slopes) check_branch_clearance(a, options.branch_clearance, "inverse_sn");

  // u = w sin(theta): du / sqrt(...) = w cos(theta) dtheta / prod sqrt(1 -+ a sin(theta)).
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double oms = one_minus_sin(theta);
    ComplexScalar root{1.0, 0.0};
    for (const ComplexScalar& a : slopes) root *= principal_sqrt(linear_factor(a, s, oms));
    return w * std::cos(theta) / root;
  };
  return integrate(integrand, 0.0, 0.5 * kPi, options.quadrature).value;
}

ComplexScalar complete_pi(ComplexScalar alpha2, ComplexScalar k, const PiOptions& options) {
  if ((1.0 - k) * (1.0 + k) == 0.0) throw DomainError("complete_pi needs k != +-1");
  if (alpha2 == 1.0) throw DomainError("complete_pi needs alpha2 != 1");
  check_branch_clearance(k, 1e-8, "complete_pi");
  check_branch_clearance(-k, 1e-8, "complete_pi");

  auto u_integrand = [&](ComplexScalar u) {
    return 1.0 / ((1.0 - alpha2 * u * u) * principal_sqrt(1.0 - u) * principal_sqrt(1.0 + u) *
                  principal_sqrt(1.0 - k * u) * principal_sqrt(1.0 + k * u));
  };
  auto theta_integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double oms = one_minus_sin(theta);
    return 1.0 / ((1.0 - alpha2 * s * s) * principal_sqrt(linear_factor(k, s, oms)) *
                  principal_sqrt(linear_factor(-k, s, oms)));
  };

  // Simple poles at u = +-1/sqrt(alpha2); find one near the real segment [0, 1].
  std::optional<double> pole_on_path;
  if (alpha2 != 0.0) {
    const ComplexScalar root = 1.0 / principal_sqrt(alpha2);
    for (const ComplexScalar& up : {root, -root}) {
      const double re = std::clamp(up.real(), 0.0, 1.0);
      if (std::abs(up - re) < options.pole_clearance) pole_on_path = re;
    }
  }
  if (!pole_on_path) return integrate(theta_integrand, 0.0, 0.5 * kPi, options.quadrature).value;

  if (!options.deform_contour)
    throw ContourError("complete_pi: pole of the integrand lies on [0,1] (u = " +
                       std::to_string(*pole_on_path) + "); enable contour deformation");

  const double up = *pole_on_path;
  const double r = options.deformation_radius;
  if (up - r <= 0.0 || up + r >= 1.0)
    throw ContourError("complete_pi: pole too close to an endpoint to deform around");

  // Semicircle on the side opposite to the nearer branch point +-1/k.
  double side = 1.0;
  if (k != 0.0) {
    const ComplexScalar bp = 1.0 / k;
    const ComplexScalar nearer = std::abs(bp - up) <= std::abs(-bp - up) ? bp : -bp;
    if (nearer.imag() > 0.0) side = -1.0;
  }
  const ComplexScalar left = integrate(theta_integrand, 0.0, std::asin(up - r), options.quadrature).value;
  const ComplexScalar right =
      integrate(theta_integrand, std::asin(up + r), 0.5 * kPi, options.quadrature).value;
  // u = up + r e^{i phi}: phi runs pi -> 0 over the top, -pi -> 0 underneath.
  auto arc = [&](double t) {
    const double phi = side > 0 ? kPi * (1.0 - t) : -kPi * (1.0 - t);
    const ComplexScalar e = std::exp(kI * phi);
    const ComplexScalar du_dt = kI * r * e * (side > 0 ? -kPi : kPi);
    return u_integrand(up + r * e) * du_dt;
  };
  const ComplexScalar bulge = integrate(arc, 0.0, 1.0, options.quadrature).value;
  return left + bulge + right;
}

ComplexScalar cycle_third_kind(ComplexScalar alpha2, ComplexScalar k, ComplexScalar z_start,
                               ComplexScalar omega, const QuadratureOptions& options) {
  auto integrand = [&](double t) {
    const ComplexScalar sn = jacobi_all(z_start + t * omega, k).sn;
    return omega / (1.0 - alpha2 * sn * sn);
  };
  return integrate(integrand, 0.0, 1.0, options).value;
}

}  // namespace qp2::elliptic
