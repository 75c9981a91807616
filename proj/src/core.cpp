#include "qp2/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qp2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string index_suffix(std::optional<std::size_t> index) {
  return index ? " at step " + std::to_string(*index) : std::string{};
}

// Replaces a factor whose magnitude is below the floor by a value of magnitude
// `floor` with the same phase (or +floor when the factor is exactly zero).
ComplexScalar regularise(ComplexScalar factor, double floor) {
  const double mag = std::abs(factor);
  if (mag >= floor) return factor;
  if (mag == 0.0) return {floor, 0.0};
  return factor * (floor / mag);
}

}  // namespace

QP2Params QP2Params::make(ComplexScalar a, ComplexScalar t0, ComplexScalar epsilon) {
  if (a == 0.0) throw DomainError("parameter a must be nonzero");
  if (t0 == 0.0) throw DomainError("base point t0 must be nonzero");
  if (epsilon == 0.0) throw DomainError("step parameter epsilon must be nonzero");
  if (!(std::abs(epsilon) < 1.0)) throw DomainError("step parameter requires |epsilon| < 1");
  if (!is_finite(a) || !is_finite(t0) || !is_finite(epsilon))
    throw DomainError("parameters must be finite");
  return QP2Params(a, t0, epsilon);
}

bool Trajectory::pole_free(std::size_t first, std::size_t last) const {
  if (last >= pole_flags.size()) return false;
  for (std::size_t k = first; k <= last; ++k)
    if (pole_flags[k]) return false;
  return true;
}

ComplexScalar step(ComplexScalar f_n, ComplexScalar f_prev, ComplexScalar t_n, ComplexScalar a,
                   double pole_floor) {
  if (std::abs(f_prev) < pole_floor)
    throw PoleError(PoleFactor::f_prev, std::nullopt, "f_{n-1} vanishes in the recurrence");
  if (std::abs(f_n) < pole_floor)
    throw PoleError(PoleFactor::f_n, std::nullopt, "f_n vanishes in the recurrence");
  const ComplexScalar shifted = f_n + t_n;
  if (std::abs(shifted) < pole_floor)
    throw PoleError(PoleFactor::f_n_plus_t, std::nullopt, "f_n + t_n vanishes in the recurrence");
  return a * (1.0 + f_n * t_n) / (f_n * shifted * f_prev);
}

ComplexScalar invariant_E(ComplexScalar f_n, ComplexScalar f_next, ComplexScalar t0, ComplexScalar a,
                          double pole_floor) {
  const ComplexScalar prod = f_next * f_n;
  if (std::abs(prod) < pole_floor)
    throw PoleError(PoleFactor::product, std::nullopt, "f_n f_{n+1} vanishes in E_n");
  const ComplexScalar sum = f_next + f_n;
  return (prod * prod + t0 * prod * sum + a * t0 * sum + a) / prod;
}

ComplexScalar quantity_L(ComplexScalar f_n, ComplexScalar f_next, ComplexScalar a, double pole_floor) {
  const ComplexScalar prod = f_next * f_n;
  if (std::abs(prod) < pole_floor)
    throw PoleError(PoleFactor::product, std::nullopt, "f_n f_{n+1} vanishes in L_n");
  return (a + prod) * (f_next + f_n) / prod;
}

Trajectory iterate(const QP2Params& params, ComplexScalar f0, ComplexScalar f1, std::size_t steps,
                   const IterateOptions& options) {
  if (steps < 2) throw DomainError("iterate requires at least 2 steps");
  if (std::abs(f0) < options.pole_floor) throw DomainError("initial value f0 must be nonzero");
  if (std::abs(f1) < options.pole_floor) throw DomainError("initial value f1 must be nonzero");

  Trajectory traj{params, {}, {}, {}, {}, {}, {}, std::nullopt};
  traj.f.reserve(steps + 1);
  traj.t.reserve(steps + 1);
  traj.pole_flags.reserve(steps + 1);
  traj.f.push_back(f0);
  traj.f.push_back(f1);
  traj.pole_flags.assign(2, 0);

  const ComplexScalar a = params.a();
  const ComplexScalar q = params.q();
  traj.t.push_back(params.t0());
  traj.t.push_back(params.t0() * q);

  for (std::size_t n = 1; n < steps; ++n) {
    const ComplexScalar f_n = traj.f[n];
    const ComplexScalar f_prev = traj.f[n - 1];
    const ComplexScalar t_n = traj.t[n];
    ComplexScalar next;
    std::uint8_t flag = 0;
    try {
      next = step(f_n, f_prev, t_n, a, options.pole_floor);
    } catch (const PoleError& err) {
      if (options.mode == PoleMode::raise)
        throw PoleError(err.factor(), n, std::string(err.what()) + index_suffix(n));
      if (options.mode == PoleMode::truncate) {
        traj.truncated_at = n;
        break;
      }
      const ComplexScalar fn = regularise(f_n, options.pole_floor);
      const ComplexScalar shifted = regularise(f_n + t_n, options.pole_floor);
      const ComplexScalar fp = regularise(f_prev, options.pole_floor);
      next = a * (1.0 + fn * t_n) / (fn * shifted * fp);
      flag = 1;
    }
    if (!is_finite(next)) {
      if (options.mode == PoleMode::raise)
        throw PoleError(PoleFactor::f_n, n, "recurrence overflowed" + index_suffix(n));
      if (options.mode == PoleMode::truncate) {
        traj.truncated_at = n;
        break;
      }
      flag = 1;
    }
    traj.f.push_back(next);
    traj.t.push_back(traj.t.back() * q);
    traj.pole_flags.push_back(flag);
  }

  const std::size_t count = traj.f.size() - 1;
  traj.E.resize(count);
  traj.L.resize(count);
  traj.J.resize(count);
  double running = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    ComplexScalar e{kNaN, kNaN};
    ComplexScalar l{kNaN, kNaN};
    try {
      e = invariant_E(traj.f[n], traj.f[n + 1], params.t0(), a, options.pole_floor);
      l = quantity_L(traj.f[n], traj.f[n + 1], a, options.pole_floor);
    } catch (const PoleError& err) {
      if (options.mode == PoleMode::raise)
        throw PoleError(err.factor(), n, std::string(err.what()) + index_suffix(n));
      if (options.mode == PoleMode::truncate) {
        traj.truncated_at = traj.truncated_at ? std::min(*traj.truncated_at, n) : n;
        traj.f.resize(n + 1);
        traj.t.resize(n + 1);
        traj.pole_flags.resize(n + 1);
        traj.E.resize(n);
        traj.L.resize(n);
        traj.J.resize(n);
        break;
      }
      traj.pole_flags[n] = 1;
      traj.pole_flags[n + 1] = 1;
    }
    traj.E[n] = e;
    traj.L[n] = l;
    if (!traj.pole_flags[n] && !traj.pole_flags[n + 1] && is_finite(l))
      running = std::max(running, std::abs(l));
    traj.J[n] = running;
  }
  return traj;
}

double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    // x^2/2 + x^3/6 + ... summed until the terms stop mattering
    double term = x * x / 2.0;
    double sum = 0.0;
    for (int k = 3; k < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
      sum += term;
      term *= x / k;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

double error_bound_E(std::size_t n, ComplexScalar t0, ComplexScalar epsilon, double J_n) {
  return 2.0 * std::abs(t0) * J_n * std::expm1(std::abs(epsilon) * static_cast<double>(n));
}

FirstOrderDrift first_order_drift(const Trajectory& traj, std::size_t n) {
  if (n >= traj.size()) throw DomainError("first_order_drift: n beyond trajectory");
  if (!traj.pole_free(0, n + 1))
    throw PoleError(PoleFactor::product, n, "first_order_drift: pole inside [0, n+1]");
  if (n == 0) return {ComplexScalar{0.0, 0.0}, 0.0};

  ComplexScalar partial{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) partial += traj.L[k];
  const ComplexScalar t0 = traj.params.t0();
  const ComplexScalar eps = traj.params.epsilon();
  const double dn = static_cast<double>(n);
  const ComplexScalar drift = -(dn * traj.L[n] - partial) * t0 * eps;
  const double M_bound = 2.0 * std::abs(t0) * traj.J[n] * expm1_minus_x(std::abs(eps) * dn);
  return {drift, M_bound};
}

std::vector<FirstOrderDrift> first_order_drift_series(const Trajectory& traj) {
  std::vector<FirstOrderDrift> out;
  const ComplexScalar t0 = traj.params.t0();
  const ComplexScalar eps = traj.params.epsilon();
  const double abs_t0 = std::abs(t0);
  const double abs_eps = std::abs(eps);
  ComplexScalar partial{0.0, 0.0};
  for (std::size_t n = 0; n < traj.size(); ++n) {
    if (traj.pole_flags[n] || traj.pole_flags[n + 1]) break;
    const double dn = static_cast<double>(n);
    out.push_back({-(dn * traj.L[n] - partial) * t0 * eps,
                   2.0 * abs_t0 * traj.J[n] * expm1_minus_x(abs_eps * dn)});
    partial += traj.L[n];
  }
  return out;
}

std::pair<ComplexScalar, ComplexScalar> solve_f1_from_E0(ComplexScalar E0, ComplexScalar f0,
                                                         ComplexScalar t0, ComplexScalar a) {
  if (f0 == 0.0) throw DomainError("solve_f1_from_E0 requires f0 != 0");
  // Clearing the denominator of E gives A f1^2 + B f1 + C = 0.
  const ComplexScalar A = f0 * (f0 + t0);
  const ComplexScalar B = t0 * f0 * f0 + a * t0 - E0 * f0;
  const ComplexScalar C = a * (t0 * f0 + 1.0);
  if (std::abs(A) < kDefaultPoleFloor)
    throw DegenerateError("quadratic for f1 degenerates: f0 (f0 + t0) vanishes");

  const ComplexScalar disc = std::sqrt(B * B - 4.0 * A * C);
  const ComplexScalar plus = B + disc;
  const ComplexScalar minus = B - disc;
  const ComplexScalar big = std::abs(plus) >= std::abs(minus) ? plus : minus;
  ComplexScalar r1, r2;
  if (big == 0.0) {
    r1 = r2 = ComplexScalar{0.0, 0.0};
  } else {
    const ComplexScalar qv = -0.5 * big;
    r1 = qv / A;
    r2 = C / qv;
  }
  auto before = [](ComplexScalar x, ComplexScalar y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    return std::arg(clean_zero(x)) < std::arg(clean_zero(y));
  };
  if (before(r2, r1)) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace qp2
