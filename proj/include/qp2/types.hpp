#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

namespace qp2 {

using ComplexScalar = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr ComplexScalar kI{0.0, 1.0};

// Replaces a negative-zero imaginary part by +0 so that principal roots of
// negative reals land on the upper branch.
inline ComplexScalar clean_zero(ComplexScalar z) {
  if (z.imag() == 0.0) return {z.real(), 0.0};
  return z;
}

inline ComplexScalar principal_sqrt(ComplexScalar z) { return std::sqrt(clean_zero(z)); }

// Principal fourth root, argument in (-pi/4, pi/4].
inline ComplexScalar principal_root4(ComplexScalar z) {
  return principal_sqrt(principal_sqrt(z));
}

inline bool is_finite(ComplexScalar z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Degeneration classes of the elliptic modulus near critical initial data.
// K2To1_* send k^2 -> 1 (hyperbolic), K2To0_* send k^2 -> 0 (trigonometric).
enum class DegenerateKind { K2To1_a, K2To1_b, K2To0_a, K2To0_b, K2To0_c };

inline constexpr DegenerateKind kAllDegenerateKinds[] = {
    DegenerateKind::K2To1_a, DegenerateKind::K2To1_b, DegenerateKind::K2To0_a,
    DegenerateKind::K2To0_b, DegenerateKind::K2To0_c};

inline std::string_view to_string(DegenerateKind kind) {
  switch (kind) {
    case DegenerateKind::K2To1_a: return "K2To1_a";
    case DegenerateKind::K2To1_b: return "K2To1_b";
    case DegenerateKind::K2To0_a: return "K2To0_a";
    case DegenerateKind::K2To0_b: return "K2To0_b";
    case DegenerateKind::K2To0_c: return "K2To0_c";
  }
  return "unknown";
}

}  // namespace qp2
