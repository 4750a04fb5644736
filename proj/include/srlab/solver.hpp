#pragma once

#include <Eigen/Dense>
#include <vector>

#include "srlab/measures.hpp"
#include "srlab/spectrum.hpp"

namespace srlab {

struct SolverOptions {
  /// Initial ADMM penalty; adapted by residual balancing.
  Real penalty = 1.0;
  int max_iterations = 50000;
  /// Primal and dual residual tolerance of the normalized problem (||y|| = 1).
  Real tolerance = 1e-7;
  /// Accepted |1 - |p(t)|^2| at a candidate support point.
  Real support_threshold = 1e-4;
  /// Accepted ||z| - 1| for a root of (1 - support_threshold/2) - |p|^2 to be a candidate.
  Real root_modulus_window = 1e-4;
  /// Candidate roots closer than this (in units of lambda_c) are merged.
  Real cluster_radius = 0.05;
  /// Amplitudes below this fraction of ||y||_2 are pruned.
  Real prune_fraction = 1e-6;
  /// Allowed excess of ||F x - y|| over delta for the final estimate.
  Real feasibility_tolerance = 1e-8;
  /// Residual balancing: rescale the penalty every this many iterations...
  int balance_interval = 10;
  /// ...when one residual exceeds the other by this factor.
  Real balance_ratio = 10.0;
  /// The penalty is frozen after this iteration; repeated switching stalls ADMM.
  int balance_until = 1000;
};

struct AdmmTraceEntry {
  Real primal_residual;
  Real dual_residual;
  Real penalty;
  Real objective;
};

/// Dual certificate of the TV program: p(t) = sum_k c_k e^{i2pi k t}.
struct DualSolution {
  int fc = 0;
  SpectrumVector c;
  /// Re<y, c> - delta ||c||, evaluated after the feasibility rescale.
  Real objective = 0.0;
  /// Largest |p| found on a 16 fc grid (with refinement) before rescaling.
  Real raw_sup = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<AdmmTraceEntry> trace;
};

/// max Re<y, c> - delta ||c||_2 subject to sup_t |p(t)| <= 1, posed through the
/// bounded-real lemma: [[Q, c], [c^*, 1]] >= 0 with sum_i Q_{i,i+j} = [j == 0].
/// Solved by ADMM with an eigendecomposition-based PSD projection.
DualSolution solve_dual(const SpectrumVector& y, Real delta, const SolverOptions& opts = {});

struct SupportExtraction {
  SupportSet support;
  /// Roots of (1 - support_threshold/2) - |p|^2 within the modulus window, before clustering.
  int unit_roots = 0;
  /// |p| is (numerically) unimodular everywhere; the support is undetermined.
  bool degenerate = false;
};

/// Support of the primal estimate read off the dual polynomial: roots of
/// (1 - support_threshold/2) - |p(t)|^2 via the companion matrix of the
/// degree-4fc algebraic form, clustered, then Newton-polished onto the maxima of |p|.
SupportExtraction extract_support_detailed(const DualSolution& dual, const SolverOptions& opts = {});
SupportSet extract_support(const DualSolution& dual, const SolverOptions& opts = {});

struct AmplitudeFit {
  AtomicMeasure estimate;
  Real residual = 0.0;
  bool feasible = false;
  /// Locations were moved by the feasibility refinement.
  bool refined = false;
  bool merged = false;
};

/// Least-squares amplitudes over the Fourier map at the given support, one
/// prune-and-refit pass, and a Gauss-Newton location refinement when the fit
/// misses the delta-ball.
AmplitudeFit fit_amplitudes_detailed(const SpectrumVector& y, const SupportSet& support, Real delta,
                                     const SolverOptions& opts = {});
AtomicMeasure fit_amplitudes(const SpectrumVector& y, const SupportSet& support, Real delta,
                             const SolverOptions& opts = {});

struct RecoveryDiagnostics {
  int iterations = 0;
  bool converged = false;
  Real primal_residual = 0.0;
  Real dual_residual = 0.0;
  Real residual_norm = 0.0;
  bool feasible = false;
  bool degenerate = false;
  bool refined = false;
  int unit_roots = 0;
  Real wall_seconds = 0.0;
};

struct RecoveryResult {
  AtomicMeasure estimate;
  DualSolution dual;
  RecoveryDiagnostics diagnostics;
};

/// solve_dual -> extract_support -> fit_amplitudes.
RecoveryResult solve_tv(const SpectrumVector& y, Real delta, const SolverOptions& opts = {});

struct OracleOptions {
  int max_iterations = 50000;
  /// Stop when the duality gap falls below this times max(1, primal objective).
  Real gap_tolerance = 1e-4;
  /// Grid weights below this fraction of the largest are dropped from the measure.
  Real report_threshold = 1e-6;
};

struct OracleResult {
  AtomicMeasure estimate;
  /// Smallest ||u||_1 among the delta-feasible projections of checked iterates.
  Real objective = 0.0;
  Real dual_objective = 0.0;
  Real gap = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::VectorXcd weights;
};

/// min ||u||_1 s.t. ||A u - y||_2 <= delta with A the Fourier map at the N grid
/// points m/N; solved by a primal-dual hybrid gradient method. N >= 8 fc.
OracleResult grid_l1_oracle(const SpectrumVector& y, Real delta, int grid_size,
                            const OracleOptions& opts = {});

/// Fourier-map residual ||F_n x - y||_2.
Real data_residual(const AtomicMeasure& x, const SpectrumVector& y);

}  // namespace srlab
