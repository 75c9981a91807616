#pragma once

// Batch kernels over independent trajectories and sn grids. The OpenMP
// versions must produce bitwise the same output as the serial ones.

#include <optional>
#include <string>
#include <vector>

#include "qp2/core.hpp"

namespace qp2 {

struct EnsembleMember {
  QP2Params params;
  ComplexScalar f0;
  ComplexScalar f1;
};

struct EnsembleOutcome {
  std::optional<Trajectory> trajectory;
  std::string error;  // empty on success
};

std::vector<EnsembleOutcome> run_ensemble(const std::vector<EnsembleMember>& members, std::size_t steps,
                                          const IterateOptions& options = {});
std::vector<EnsembleOutcome> run_ensemble_serial(const std::vector<EnsembleMember>& members,
                                                 std::size_t steps, const IterateOptions& options = {});

// sn(z; k) for every z (no pole check).
std::vector<ComplexScalar> sn_grid(const std::vector<ComplexScalar>& zs, ComplexScalar k);
std::vector<ComplexScalar> sn_grid_serial(const std::vector<ComplexScalar>& zs, ComplexScalar k);

}  // namespace qp2
