#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "srlab/harness.hpp"
#include "srlab/io.hpp"

using namespace srlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig tiny_config(const fs::path& dir) {
  ExperimentConfig c;
  c.fc = {10};
  c.spike_counts = {1, 2};
  c.deltas = {0.0, 1e-2};
  c.trials = 2;
  c.seed = 7;
  c.csv_path = (dir / "out.csv").string();
  c.jsonl_path = (dir / "out.jsonl").string();
  return c;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("srlab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("single spike has infinite separation") {
  const AtomicMeasure x = generate_instance(20, 1, 1.0, {}, 3);
  REQUIRE(x.size() == 1);
  CHECK(min_separation(x.support()) == kInfiniteSeparation);
  CHECK(std::abs(x[0].amplitude) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fc = 64, k = 10 respects the separation") {
  const AtomicMeasure x = generate_instance(64, 10, 1.0, {}, 11);
  CHECK(x.size() == 10);
  CHECK(min_separation(x.support()) >= 2.0 / 64);
}

TEST_CASE("property: generated instances respect separation and amplitude model") {
  testgen::Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int fc = 2 * (5 + static_cast<int>(testgen::uniform(rng, 0, 60)));
    const Real sep = testgen::uniform(rng, 1.0, 2.0);
    const int kmax = static_cast<int>(std::floor(fc / (2.0 * sep) / 3.0));
    const int k = 1 + static_cast<int>(testgen::uniform(rng, 0, std::max(1, kmax)));
    AmplitudeSpec amps{AmplitudeModel::LogUniform, 0.1, 10.0};
    const AtomicMeasure x = generate_instance(fc, k, sep, amps, trial);
    CHECK(static_cast<int>(x.size()) == k);
    CHECK(min_separation(x.support()) >= sep * 2.0 / fc);
    for (const auto& s : x) {
      CHECK(std::abs(s.amplitude) >= 0.1 * (1 - 1e-12));
      CHECK(std::abs(s.amplitude) <= 10.0 * (1 + 1e-12));
    }
  }
}

TEST_CASE("instances are deterministic in the seed") {
  const AtomicMeasure a = generate_instance(32, 5, 1.0, {}, 99), b = generate_instance(32, 5, 1.0, {}, 99);
  const AtomicMeasure c = generate_instance(32, 5, 1.0, {}, 100);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].amplitude == b[i].amplitude);
  }
  CHECK(a[0].t != c[0].t);
}

TEST_CASE("instance errors") {
  CHECK_THROWS_AS(generate_instance(20, 10, 1.0, {}, 1), Error);
  CHECK_THROWS_AS(generate_instance(20, 2, 0.5, {}, 1), Error);
  CHECK_THROWS_AS(generate_instance(20, 0, 1.0, {}, 1), Error);
  CHECK_THROWS_AS(generate_instance(20, 2, 1.0, {AmplitudeModel::LogUniform, 2.0, 1.0}, 1), Error);
  // Feasible in principle, but rejection sampling cannot pack it.
  CHECK_THROWS_AS(generate_instance(200, 99, 1.0, {}, 1), Error);
  CHECK(parse_amplitude_model("log_uniform") == AmplitudeModel::LogUniform);
  CHECK_THROWS_AS(parse_amplitude_model("gaussian"), Error);
}

TEST_CASE("seed derivation separates cells and trials") {
  CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
  CHECK(derive_seed(1, 0, 1) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.sep_mult = 0.9;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.spike_counts = {20};
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.deltas = {-1.0};
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.fc = {};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("cells are ordered fc, spike count, delta") {
  ExperimentConfig c;
  c.fc = {10, 20};
  c.spike_counts = {1, 2};
  c.deltas = {0.0, 0.1, 0.2};
  const auto cells = experiment_cells(c);
  REQUIRE(cells.size() == 12);
  CHECK(cells[0].fc == 10);
  CHECK(cells[5].fc == 10);
  CHECK(cells[6].fc == 20);
  CHECK(cells[3].spike_count == 2);
  CHECK(cells[4].delta_value == 0.1);
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].index == static_cast<int>(i));
  c.deltas.clear();
  CHECK(experiment_cells(c).size() == 4);
}

TEST_CASE("trials are reproducible and noise sits on the ball") {
  ExperimentConfig c;
  c.fc = {10};
  c.spike_counts = {2};
  c.deltas = {1e-2};
  const ExperimentCell cell = experiment_cells(c)[0];
  const TrialRecord a = run_trial(c, cell, 3), b = run_trial(c, cell, 3);
  CHECK(a.ok);
  CHECK(a.seed == b.seed);
  CHECK(csv_row(a) == csv_row(b));
  CHECK(a.delta == doctest::Approx(1e-2 * lowpass_sample(a.truth, 10).coeffs.norm()).epsilon(1e-14));
  CHECK(a.diagnostics.feasible);
}

TEST_CASE("experiment output is byte-identical across runs and resumable") {
  const fs::path d1 = fresh_dir("run1"), d2 = fresh_dir("run2");
  ExperimentConfig c1 = tiny_config(d1), c2 = tiny_config(d2);
  c2.workers = 3;
  const auto r1 = run_experiment(c1);
  const auto r2 = run_experiment(c2);
  CHECK(r1.size() == 8);
  const std::string csv = slurp(c1.csv_path);
  CHECK(csv == slurp(c2.csv_path));
  CHECK(csv.rfind("# schema=1\n", 0) == 0);

  // Chop the file mid-cell and resume: complete cells are kept, the rest rerun.
  std::istringstream lines(csv);
  std::string line, partial;
  for (int i = 0; i < 2 + 3 && std::getline(lines, line); ++i) partial += line + "\n";
  write_text_file(c1.csv_path, partial);
  int delivered = 0;
  const auto resumed = run_experiment(c1, [&](const TrialRecord&) { ++delivered; });
  CHECK(resumed.size() == 6);
  CHECK(delivered == 6);
  CHECK(slurp(c1.csv_path) == csv);

  std::ifstream jl(c1.jsonl_path);
  int records = 0;
  while (std::getline(jl, line)) records += !line.empty();
  CHECK(records == 8);
}

TEST_CASE("resume refuses a foreign CSV") {
  const fs::path d = fresh_dir("foreign");
  ExperimentConfig c = tiny_config(d);
  write_text_file(c.csv_path, "a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("environment overrides") {
  ExperimentConfig c;
  ::setenv("SRLAB_SEED", "12345", 1);
  ::setenv("SRLAB_OUT", "/tmp/srlab_env_out", 1);
  apply_env_overrides(c);
  ::unsetenv("SRLAB_SEED");
  ::unsetenv("SRLAB_OUT");
  CHECK(c.seed == 12345);
  CHECK(c.csv_path == "/tmp/srlab_env_out.csv");
  CHECK(c.jsonl_path == "/tmp/srlab_env_out.jsonl");
  ExperimentConfig untouched;
  apply_env_overrides(untouched);
  CHECK(untouched.seed == 0);
  CHECK(untouched.csv_path.empty());
}

}  // TEST_SUITE
