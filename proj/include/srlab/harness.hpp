#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srlab/guarantees.hpp"
#include "srlab/measures.hpp"
#include "srlab/solver.hpp"
#include "srlab/spectrum.hpp"

namespace srlab {

enum class AmplitudeModel { UnitModulus, LogUniform };

struct AmplitudeSpec {
  AmplitudeModel model = AmplitudeModel::UnitModulus;
  /// Magnitude range for LogUniform.
  Real m_min = 1.0;
  Real m_max = 1.0;
};

AmplitudeModel parse_amplitude_model(const std::string& name);
std::string to_string(AmplitudeModel model);

constexpr int kMaxPlacementAttempts = 100000;

/// k spikes with min_separation >= sep_mult * 2 / fc, placed by sequential
/// rejection sampling. Throws Error once kMaxPlacementAttempts draws are spent.
AtomicMeasure generate_instance(int fc, int k, Real sep_mult, const AmplitudeSpec& amplitudes,
                                std::uint64_t seed);

/// Deterministic per-trial seed from (seed, cell, trial).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial);

enum class DeltaKind { Absolute, Relative };

struct ExperimentConfig {
  std::vector<int> fc{32};
  std::vector<int> spike_counts{4};
  Real sep_mult = 1.0;
  AmplitudeSpec amplitudes;
  /// Empty means a single noiseless level.
  std::vector<Real> deltas;
  /// Relative: delta = value * ||F_n x||_2.
  DeltaKind delta_kind = DeltaKind::Relative;
  NoiseMode noise_mode = NoiseMode::SphericalRandom;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string jsonl_path;
  int workers = 1;
  SolverOptions solver;

  /// Throws Error on an unusable configuration.
  void validate() const;
};

struct ExperimentCell {
  int index = 0;
  int fc = 0;
  int spike_count = 0;
  /// As configured (absolute or relative).
  Real delta_value = 0.0;
};

/// Cells in factorial order: fc outermost, then spike count, then delta.
std::vector<ExperimentCell> experiment_cells(const ExperimentConfig& config);

struct TrialRecord {
  ExperimentCell cell;
  int trial = 0;
  std::uint64_t seed = 0;
  /// Absolute noise level used.
  Real delta = 0.0;
  Real separation = 0.0;
  AtomicMeasure truth;
  AtomicMeasure estimate;
  GuaranteeReport guarantees;
  RecoveryDiagnostics diagnostics;
  bool ok = false;
  std::string error;
};

/// One trial; a pure function of (config, cell, trial). Failures are recorded
/// in the record rather than thrown.
TrialRecord run_trial(const ExperimentConfig& config, const ExperimentCell& cell, int trial);

/// Full factorial sweep. Appends to config.csv_path / config.jsonl_path when set;
/// cells already complete in an existing CSV are skipped. Records are delivered
/// to `on_record` (if given) in deterministic order as they complete.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        const std::function<void(const TrialRecord&)>& on_record = {});

}  // namespace srlab
