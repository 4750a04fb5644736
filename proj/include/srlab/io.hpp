#pragma once

#include <json.hpp>
#include <string>

#include "srlab/certificate.hpp"
#include "srlab/guarantees.hpp"
#include "srlab/harness.hpp"
#include "srlab/kernel.hpp"
#include "srlab/solver.hpp"

namespace srlab {

using Json = nlohmann::json;

// {"spikes": [{"t": ..., "re": ..., "im": ...}, ...]}
Json to_json(const AtomicMeasure& x);
AtomicMeasure measure_from_json(const Json& j);

// {"fc": ..., "coeffs": [[re, im], ...]} with k = -fc..fc.
Json to_json(const SpectrumVector& y);
SpectrumVector spectrum_from_json(const Json& j);

// {"fc": ..., "points": [...]}; "fc" is optional.
SupportSet support_from_json(const Json& j);

Json to_json(const KernelBoundReport& r);
Json to_json(const Certificate& q);
Json to_json(const CertificateReport& r);
Json to_json(const RecoveryDiagnostics& d);
Json to_json(const RecoveryResult& r);
Json to_json(const OracleResult& r);
Json to_json(const GuaranteeReport& r);
Json to_json(const TrialRecord& r);

Json to_json(const SolverOptions& o);
/// Missing keys keep their defaults; unknown keys are rejected.
SolverOptions solver_options_from_json(const Json& j);

Json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);
/// SRLAB_SEED replaces the seed; SRLAB_OUT sets csv_path to $SRLAB_OUT.csv and
/// jsonl_path to $SRLAB_OUT.jsonl.
void apply_env_overrides(ExperimentConfig& c);

/// Header block of the trial CSV, including the schema comment line.
std::string csv_header();
/// One CSV line (no trailing newline) for a trial.
std::string csv_row(const TrialRecord& r);
/// Cell index of a data row; -1 for comments and the header.
int csv_row_cell(const std::string& line);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace srlab
