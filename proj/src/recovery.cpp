#include <chrono>

#include "srlab/solver.hpp"

namespace srlab {

RecoveryResult solve_tv(const SpectrumVector& y, Real delta, const SolverOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RecoveryResult out;
  out.dual = solve_dual(y, delta, opts);
  const SupportExtraction support = extract_support_detailed(out.dual, opts);
  const AmplitudeFit fit = fit_amplitudes_detailed(y, support.support, delta, opts);
  out.estimate = fit.estimate;

  auto& d = out.diagnostics;
  d.iterations = out.dual.iterations;
  d.converged = out.dual.converged;
  if (!out.dual.trace.empty()) {
    d.primal_residual = out.dual.trace.back().primal_residual;
    d.dual_residual = out.dual.trace.back().dual_residual;
  }
  d.residual_norm = fit.residual;
  d.feasible = fit.feasible;
  d.degenerate = support.degenerate;
  d.refined = fit.refined;
  d.unit_roots = support.unit_roots;
  d.wall_seconds = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace srlab
