#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "srlab/harness.hpp"
#include "srlab/io.hpp"

namespace srlab {

void ExperimentConfig::validate() const {
  if (fc.empty()) throw Error("config: fc list is empty");
  if (spike_counts.empty()) throw Error("config: spike count list is empty");
  if (!(sep_mult >= 1.0)) throw Error("config: separation multiplier must be >= 1");
  for (int f : fc)
    if (f < 1) throw Error("config: fc must be positive");
  for (int f : fc)
    for (int k : spike_counts) {
      if (k < 1) throw Error("config: spike counts must be positive");
      if (!(k * (2.0 / f) * sep_mult < 1.0))
        throw Error("config: " + std::to_string(k) + " spikes do not fit at fc = " + std::to_string(f));
    }
  for (Real d : deltas)
    if (!(d >= 0.0)) throw Error("config: delta values must be nonnegative");
  if (noise_mode == NoiseMode::AdversarialFile)
    throw Error("config: adversarial-file noise is not available in sweeps");
  if (trials < 1) throw Error("config: trials must be positive");
  if (workers < 1) throw Error("config: workers must be positive");
  if (amplitudes.model == AmplitudeModel::LogUniform &&
      !(amplitudes.m_min > 0.0 && amplitudes.m_min <= amplitudes.m_max))
    throw Error("config: need 0 < m_min <= m_max");
}

std::vector<ExperimentCell> experiment_cells(const ExperimentConfig& config) {
  const std::vector<Real> deltas = config.deltas.empty() ? std::vector<Real>{0.0} : config.deltas;
  std::vector<ExperimentCell> cells;
  for (int f : config.fc)
    for (int k : config.spike_counts)
      for (Real d : deltas) cells.push_back({static_cast<int>(cells.size()), f, k, d});
  return cells;
}

TrialRecord run_trial(const ExperimentConfig& config, const ExperimentCell& cell, int trial) {
  TrialRecord r;
  r.cell = cell;
  r.trial = trial;
  r.seed = derive_seed(config.seed, static_cast<std::uint64_t>(cell.index), static_cast<std::uint64_t>(trial));
  try {
    r.truth = generate_instance(cell.fc, cell.spike_count, config.sep_mult, config.amplitudes, r.seed);
    r.separation = min_separation(r.truth.support());
    const SpectrumVector clean = lowpass_sample(r.truth, cell.fc);
    r.delta = config.delta_kind == DeltaKind::Relative ? cell.delta_value * clean.coeffs.norm()
                                                       : cell.delta_value;
    NoiseSpec noise;
    noise.delta = r.delta;
    noise.mode = config.noise_mode;
    noise.seed = derive_seed(r.seed, 0x6e6f697365ULL, 0);
    const SpectrumVector y = add_noise(clean, noise);
    const RecoveryResult rec = solve_tv(y, r.delta, config.solver);
    r.estimate = rec.estimate;
    r.diagnostics = rec.diagnostics;
    r.guarantees = guarantee_report(r.truth, r.estimate, cell.fc, r.delta);
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

/// Drops rows of incomplete cells from existing outputs and returns the set of
/// complete cells. Starts fresh files (CSV with header) when absent.
std::set<int> prepare_outputs(const ExperimentConfig& config) {
  std::set<int> complete;
  const bool have_csv = !config.csv_path.empty() && std::filesystem::exists(config.csv_path) &&
                        std::filesystem::file_size(config.csv_path) > 0;
  if (have_csv) {
    const auto lines = read_lines(config.csv_path);
    if (lines.empty() || lines[0] != "# schema=1")
      throw Error(config.csv_path + ": not a schema=1 trial CSV");
    std::map<int, int> counts;
    for (const auto& l : lines)
      if (const int c = csv_row_cell(l); c >= 0) ++counts[c];
    for (const auto& [c, n] : counts)
      if (n == config.trials) complete.insert(c);
    std::string kept = csv_header() + "\n";
    for (const auto& l : lines)
      if (const int c = csv_row_cell(l); c >= 0 && complete.count(c)) kept += l + "\n";
    write_text_file(config.csv_path, kept);
  } else if (!config.csv_path.empty()) {
    write_text_file(config.csv_path, csv_header() + "\n");
  }

  if (!config.jsonl_path.empty()) {
    std::string kept;
    if (have_csv && std::filesystem::exists(config.jsonl_path)) {
      for (const auto& l : read_lines(config.jsonl_path)) {
        if (l.empty()) continue;
        const Json j = Json::parse(l, nullptr, false);
        if (!j.is_discarded() && j.contains("cell") && complete.count(j["cell"].get<int>()))
          kept += l + "\n";
      }
    }
    write_text_file(config.jsonl_path, kept);
  }
  return complete;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        const std::function<void(const TrialRecord&)>& on_record) {
  config.validate();
  const auto cells = experiment_cells(config);
  const std::set<int> complete = prepare_outputs(config);

  std::vector<std::pair<ExperimentCell, int>> work;
  for (const auto& cell : cells)
    if (!complete.count(cell.index))
      for (int t = 0; t < config.trials; ++t) work.emplace_back(cell, t);

  std::ofstream csv, jsonl;
  if (!config.csv_path.empty()) csv.open(config.csv_path, std::ios::app);
  if (!config.jsonl_path.empty()) jsonl.open(config.jsonl_path, std::ios::app);

  std::vector<TrialRecord> records;
  records.reserve(work.size());
  auto collect = [&](TrialRecord r) {
    if (csv.is_open()) csv << csv_row(r) << '\n' << std::flush;
    if (jsonl.is_open()) jsonl << to_json(r).dump() << '\n' << std::flush;
    if (on_record) on_record(r);
    records.push_back(std::move(r));
  };

  const int workers = std::min<int>(config.workers, static_cast<int>(std::max<std::size_t>(1, work.size())));
  if (workers <= 1) {
    for (const auto& [cell, t] : work) collect(run_trial(config, cell, t));
    return records;
  }

  // Workers fill slots in any order; the calling thread collects them in order.
  std::vector<std::optional<TrialRecord>> slots(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable ready;
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < work.size();) {
        TrialRecord r = run_trial(config, work[i].first, work[i].second);
        std::lock_guard lock(mu);
        slots[i] = std::move(r);
        ready.notify_all();
      }
    });
  for (std::size_t i = 0; i < work.size(); ++i) {
    std::unique_lock lock(mu);
    ready.wait(lock, [&] { return slots[i].has_value(); });
    TrialRecord r = std::move(*slots[i]);
    slots[i].reset();
    lock.unlock();
    collect(std::move(r));
  }
  return records;
}

}  // namespace srlab
