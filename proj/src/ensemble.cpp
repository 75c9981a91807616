#include "qp2/ensemble.hpp"

#include "qp2/elliptic_fn.hpp"
#include "qp2/errors.hpp"

namespace qp2 {

namespace {

EnsembleOutcome run_one(const EnsembleMember& member, std::size_t steps, const IterateOptions& options) {
  EnsembleOutcome out;
  try {
    out.trajectory = iterate(member.params, member.f0, member.f1, steps, options);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<EnsembleOutcome> run_ensemble(const std::vector<EnsembleMember>& members, std::size_t steps,
                                          const IterateOptions& options) {
  std::vector<EnsembleOutcome> out(members.size());
  const auto count = static_cast<long>(members.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) out[i] = run_one(members[i], steps, options);
  return out;
}

std::vector<EnsembleOutcome> run_ensemble_serial(const std::vector<EnsembleMember>& members,
                                                 std::size_t steps, const IterateOptions& options) {
  std::vector<EnsembleOutcome> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(run_one(m, steps, options));
  return out;
}

std::vector<ComplexScalar> sn_grid(const std::vector<ComplexScalar>& zs, ComplexScalar k) {
  std::vector<ComplexScalar> out(zs.size());
  const auto count = static_cast<long>(zs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) out[i] = elliptic::jacobi_all(zs[i], k).sn;
  return out;
}

std::vector<ComplexScalar> sn_grid_serial(const std::vector<ComplexScalar>& zs, ComplexScalar k) {
  std::vector<ComplexScalar> out;
  out.reserve(zs.size());
  for (ComplexScalar z : zs) out.push_back(elliptic::jacobi_all(z, k).sn);
  return out;
}

}  // namespace qp2
