#pragma once

// Exact iteration of the recurrence
//
//   f_{n+1} f_{n-1} = a (1 + f_n t_n) / (f_n (f_n + t_n)),   t_n = t0 (1+eps)^n,
//
// together with the near-invariant E_n, the companion sequence L_n, and the
// explicit bounds on how far E_n can wander from E_0.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qp2/errors.hpp"
#include "qp2/types.hpp"

namespace qp2 {

inline constexpr double kDefaultPoleFloor = 1e-13;

class QP2Params {
 public:
  // Throws DomainError unless a, t0, epsilon are nonzero and |epsilon| < 1.
  static QP2Params make(ComplexScalar a, ComplexScalar t0, ComplexScalar epsilon);

  ComplexScalar a() const { return a_; }
  ComplexScalar t0() const { return t0_; }
  ComplexScalar epsilon() const { return epsilon_; }
  ComplexScalar q() const { return q_; }

 private:
  QP2Params(ComplexScalar a, ComplexScalar t0, ComplexScalar epsilon)
      : a_(a), t0_(t0), epsilon_(epsilon), q_(1.0 + epsilon) {}

  ComplexScalar a_;
  ComplexScalar t0_;
  ComplexScalar epsilon_;
  ComplexScalar q_;
};

enum class PoleMode {
  raise,     // throw PoleError at the first vanishing denominator
  truncate,  // stop and record the index
  skip,      // regularise the vanishing factor to the floor, flag, continue
};

struct IterateOptions {
  PoleMode mode = PoleMode::raise;
  double pole_floor = kDefaultPoleFloor;
};

// f has N+1 entries (f_0..f_N); E, L, J, pole_flags are indexed 0..N-1 since
// E_n and L_n need f_{n+1}. t has N+1 entries.
struct Trajectory {
  QP2Params params;
  std::vector<ComplexScalar> f;
  std::vector<ComplexScalar> t;
  std::vector<ComplexScalar> E;
  std::vector<ComplexScalar> L;
  std::vector<double> J;
  std::vector<std::uint8_t> pole_flags;  // per f index
  std::optional<std::size_t> truncated_at;

  std::size_t size() const { return E.size(); }
  // True when no f_k with k in [first, last] is flagged.
  bool pole_free(std::size_t first, std::size_t last) const;
};

ComplexScalar step(ComplexScalar f_n, ComplexScalar f_prev, ComplexScalar t_n, ComplexScalar a,
                   double pole_floor = kDefaultPoleFloor);

Trajectory iterate(const QP2Params& params, ComplexScalar f0, ComplexScalar f1, std::size_t steps,
                   const IterateOptions& options = {});

ComplexScalar invariant_E(ComplexScalar f_n, ComplexScalar f_next, ComplexScalar t0, ComplexScalar a,
                          double pole_floor = kDefaultPoleFloor);

ComplexScalar quantity_L(ComplexScalar f_n, ComplexScalar f_next, ComplexScalar a,
                         double pole_floor = kDefaultPoleFloor);

// 2|t0| J_n (e^{|eps| n} - 1)
double error_bound_E(std::size_t n, ComplexScalar t0, ComplexScalar epsilon, double J_n);

// e^x - 1 - x without cancellation for small x.
double expm1_minus_x(double x);

struct FirstOrderDrift {
  ComplexScalar drift;
  double M_bound;
};

// drift = -(n L_n - sum_{k<n} L_k) t0 eps,  M_bound = 2|t0| J_n (e^{|eps|n} - 1 - |eps|n)
FirstOrderDrift first_order_drift(const Trajectory& traj, std::size_t n);

// first_order_drift for every n of the pole-free prefix, in one pass.
std::vector<FirstOrderDrift> first_order_drift_series(const Trajectory& traj);

// Both f1 with invariant_E(f0, f1, t0, a) == E0, ascending |root| then arg.
std::pair<ComplexScalar, ComplexScalar> solve_f1_from_E0(ComplexScalar E0, ComplexScalar f0,
                                                         ComplexScalar t0, ComplexScalar a);

}  // namespace qp2
