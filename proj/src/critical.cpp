#include "qp2/critical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qp2/errors.hpp"

namespace qp2 {

namespace {

constexpr double kVanishing = 1e-12;
constexpr double kDenominatorTolerance = 1e-10;

struct Ratio {
  ComplexScalar num;
  ComplexScalar den;

  ComplexScalar value() const { return num / den; }
  bool degenerate() const { return std::abs(num) < kVanishing || std::abs(den) < kVanishing; }
};

Ratio c0_fourth(DegenerateKind kind, ComplexScalar t0) {
  switch (kind) {
    case DegenerateKind::K2To1_a: return {(t0 - 2.0) * (t0 - 2.0), (t0 + 2.0) * (t0 + 2.0)};
    case DegenerateKind::K2To1_b: return {1.0, 1.0};
    case DegenerateKind::K2To0_a: return {1.0 - t0, 1.0 + t0};
    case DegenerateKind::K2To0_b: return {8.0 * t0, 1.0};
    case DegenerateKind::K2To0_c: return {-1.0, 8.0 * t0};
  }
  return {1.0, 1.0};
}

std::optional<Ratio> A0_fourth(DegenerateKind kind, ComplexScalar t0) {
  const ComplexScalar t4 = t0 * t0 * t0 * t0;
  switch (kind) {
    case DegenerateKind::K2To0_a: return Ratio{-(t0 + 1.0) * (t0 - 1.0), 16.0 * t4};
    case DegenerateKind::K2To0_b:
      return Ratio{(t0 + 1.0) * (t0 + 1.0), 2.0 * t0 * (t0 + 2.0) * (t0 + 2.0)};
    case DegenerateKind::K2To0_c:
      return Ratio{-(t0 - 1.0) * (t0 - 1.0), 2.0 * t0 * (t0 - 2.0) * (t0 - 2.0)};
    default: return std::nullopt;
  }
}

bool constants_vanish(DegenerateKind kind, ComplexScalar t0) {
  if (c0_fourth(kind, t0).degenerate()) return true;
  const auto a = A0_fourth(kind, t0);
  return a && a->degenerate();
}

ComplexScalar critical_value(DegenerateKind kind, ComplexScalar t0) {
  switch (kind) {
    case DegenerateKind::K2To1_a: return -2.0 - t0 * t0;
    case DegenerateKind::K2To0_a: return -2.0;
    case DegenerateKind::K2To0_b: return 2.0 + 4.0 * t0;
    case DegenerateKind::K2To0_c: return 2.0 - 4.0 * t0;
    case DegenerateKind::K2To1_b: break;
  }
  return std::numeric_limits<double>::infinity();
}

ComplexScalar closest_rotation(ComplexScalar base, ComplexScalar target, ComplexScalar scale = 1.0) {
  ComplexScalar best = base;
  double dist = std::numeric_limits<double>::infinity();
  ComplexScalar rot{1.0, 0.0};
  for (int j = 0; j < 4; ++j, rot *= kI) {
    const double d = std::abs(base * rot * scale - target);
    if (d < dist) {
      dist = d;
      best = base * rot;
    }
  }
  return best;
}

ComplexScalar checked_ratio(ComplexScalar num, ComplexScalar den) {
  if (std::abs(den) < kDenominatorTolerance)
    throw PoleProximityError("degenerate expansion evaluated at a pole");
  return num / den;
}

}  // namespace

std::vector<CriticalValue> critical_E0_values(ComplexScalar t0) {
  if (t0 == 0.0) throw DomainError("critical values need t0 != 0");
  std::vector<CriticalValue> out;
  for (DegenerateKind kind : kAllDegenerateKinds) {
    if (kind == DegenerateKind::K2To1_b) {
      out.push_back({{kind}, std::nullopt, false});
      continue;
    }
    const ComplexScalar value = critical_value(kind, t0);
    const bool vanish = constants_vanish(kind, t0);
    auto same = std::find_if(out.begin(), out.end(), [&](const CriticalValue& cv) {
      return cv.E0 && std::abs(*cv.E0 - value) <= kGroupingTolerance * (1.0 + std::abs(value));
    });
    if (same != out.end()) {
      same->kinds.push_back(kind);
      same->vanishing_constant = same->vanishing_constant || vanish;
    } else {
      out.push_back({{kind}, value, vanish});
    }
  }
  return out;
}

ComplexScalar critical_offset(DegenerateKind kind, ComplexScalar E0, ComplexScalar t0) {
  if (kind == DegenerateKind::K2To1_b) return 1.0 / E0;
  return E0 - critical_value(kind, t0);
}

DegenerateCase make_case(DegenerateKind kind, ComplexScalar E0, ComplexScalar t0) {
  if (t0 == 0.0) throw DomainError("degenerate cases need t0 != 0");
  DegenerateCase dc{kind, {kind}, critical_offset(kind, E0, t0), principal_root4(c0_fourth(kind, t0).value()),
                    std::nullopt};
  if (const auto a = A0_fourth(kind, t0)) dc.A0 = principal_root4(a->value());
  return dc;
}

std::optional<DegenerateCase> classify(ComplexScalar E0, ComplexScalar t0, double tol) {
  if (!(tol > 0.0)) throw DomainError("classify needs tol > 0");
  std::array<double, 5> dist{};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 5; ++i) {
    const DegenerateKind kind = kAllDegenerateKinds[i];
    if (kind == DegenerateKind::K2To1_b) {
      dist[i] = std::abs(E0) > 1.0 / tol ? 1.0 / std::abs(E0) : std::numeric_limits<double>::infinity();
    } else {
      dist[i] = std::abs(critical_offset(kind, E0, t0));
    }
    best = std::min(best, dist[i]);
  }
  if (!(best < tol)) return std::nullopt;

  std::optional<DegenerateCase> out;
  for (std::size_t i = 0; i < 5; ++i) {
    if (dist[i] > best + kGroupingTolerance) continue;
    if (!out) {
      out = make_case(kAllDegenerateKinds[i], E0, t0);
    } else {
      out->group.push_back(kAllDegenerateKinds[i]);
    }
  }
  return out;
}

ComplexScalar degenerate_predict(const DegenerateCase& dc, ComplexScalar z, ComplexScalar t0) {
  switch (dc.kind) {
    case DegenerateKind::K2To1_a: {
      const ComplexScalar T = std::tanh(z);
      return checked_ratio(dc.c0 + T, dc.c0 - T);
    }
    case DegenerateKind::K2To1_b: {
      const ComplexScalar T = std::tanh(z);
      const ComplexScalar lead = checked_ratio(1.0 + T, 1.0 - T);
      return lead - 4.0 * t0 * checked_ratio(T, (T - 1.0) * (T - 1.0)) * dc.delta;
    }
    case DegenerateKind::K2To0_a:
    case DegenerateKind::K2To0_b: {
      const ComplexScalar r = *dc.A0 / dc.c0;
      const ComplexScalar s = std::sin(z);
      return 1.0 + 2.0 * r * s * principal_sqrt(dc.delta) + 2.0 * r * r * s * s * dc.delta;
    }
    case DegenerateKind::K2To0_c: {
      const ComplexScalar s = *dc.A0 * std::sin(z);
      return checked_ratio(dc.c0 + s, dc.c0 - s);
    }
  }
  return {0.0, 0.0};
}

DegenerateCase align_to_curve(const DegenerateCase& dc, const CurveModel& curve) {
  DegenerateCase out = dc;
  const ComplexScalar c = curve.canonical.c;
  switch (dc.kind) {
    case DegenerateKind::K2To1_a: out.c0 = closest_rotation(dc.c0, c / curve.A); break;
    case DegenerateKind::K2To0_a:
    case DegenerateKind::K2To0_b:
      out.A0 = closest_rotation(*dc.A0, curve.A / (c * principal_sqrt(dc.delta)), 1.0 / dc.c0);
      break;
    case DegenerateKind::K2To0_c: out.A0 = closest_rotation(*dc.A0, curve.A / c, 1.0 / dc.c0); break;
    case DegenerateKind::K2To1_b: break;
  }
  return out;
}

ComplexScalar offset_E0(DegenerateKind kind, ComplexScalar t0, ComplexScalar offset) {
  if (kind == DegenerateKind::K2To1_b) return offset;
  return critical_value(kind, t0) + offset;
}

std::vector<double> default_z_grid(DegenerateKind kind, int points) {
  double lo = 0.0;
  double hi = 2.0 * kPi;
  if (kind == DegenerateKind::K2To1_a) {
    lo = -1.2;
    hi = 1.2;
  } else if (kind == DegenerateKind::K2To1_b) {
    lo = -1.0;
    hi = 1.0;
  }
  std::vector<double> zs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) zs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return zs;
}

CaseGap degenerate_gap(DegenerateKind kind, ComplexScalar t0, ComplexScalar offset,
                       const std::vector<double>& zs) {
  const ComplexScalar E0 = offset_E0(kind, t0, offset);
  const CurveModel curve = curve_model(E0, t0);
  const DegenerateCase dc = align_to_curve(make_case(kind, E0, t0), curve);
  CaseGap gap{E0, curve.k, 0.0};
  for (double z : zs)
    gap.sup_error = std::max(gap.sup_error, std::abs(curve_value(curve, z) - degenerate_predict(dc, z, t0)));
  return gap;
}

std::vector<double> convergence_orders(const std::vector<double>& offsets, const std::vector<double>& errors) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < std::min(offsets.size(), errors.size()); ++i)
    orders.push_back(std::log(errors[i + 1] / errors[i]) / std::log(offsets[i + 1] / offsets[i]));
  return orders;
}

double expected_order(DegenerateKind kind) {
  switch (kind) {
    case DegenerateKind::K2To1_a: return 0.5;
    case DegenerateKind::K2To0_c: return 1.0;
    default: return 1.5;
  }
}

}  // namespace qp2
