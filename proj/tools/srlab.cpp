#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>

#include "srlab/certificate.hpp"
#include "srlab/harness.hpp"
#include "srlab/io.hpp"

using namespace srlab;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "json";
  std::vector<int> fc;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double grid_step = 1.0 / 200.0;
};

void emit(const Common& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text << (text.empty() || text.back() != '\n' ? "\n" : "");
  else
    write_text_file(o.out, text);
}

SolverOptions solver_options(const Common& o) {
  if (o.config.empty()) return {};
  const Json j = read_json_file(o.config);
  return solver_options_from_json(j.contains("solver") ? j["solver"] : j);
}

int single_fc(const Common& o, const char* cmd) {
  if (o.fc.size() != 1) throw Error(std::string(cmd) + ": exactly one --fc is required");
  return o.fc[0];
}

std::string checks_csv(const std::string& label, int fc, const std::vector<PropertyCheck>& checks) {
  std::string s;
  char buf[512];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%s,%d,\"%s\",%.17g,%.17g,%d\n", label.c_str(), fc, c.name.c_str(),
                  c.measured, c.bound, c.pass ? 1 : 0);
    s += buf;
  }
  return s;
}

std::vector<PropertyCheck> kernel_checks(const KernelBoundReport& r) {
  std::vector<PropertyCheck> out;
  for (const auto& c : r.checks) out.push_back({to_string(c.region) + " " + c.name, c.measured, c.bound, c.pass});
  return out;
}

std::vector<PropertyCheck> system_checks(const InterpolationSystem& sys) {
  return {{"||I - S||_inf", sys.identity_minus_schur, bounds::kIdentityMinusSchur,
           sys.identity_minus_schur <= bounds::kIdentityMinusSchur},
          {"||S^-1||_inf", sys.schur_inverse, bounds::kSchurInverse, sys.schur_inverse <= bounds::kSchurInverse},
          {"||I - S^-1||_inf", sys.identity_minus_schur_inverse, bounds::kIdentityMinusSchurInverse,
           sys.identity_minus_schur_inverse <= bounds::kIdentityMinusSchurInverse}};
}

struct SuiteOutput {
  Json json = Json::array();
  std::string csv;
  bool pass = true;
};

/// Sign certificate with random phases and every localizer of `support`.
void certify_support(const SupportSet& support, int fc, Real grid_step, std::uint64_t seed,
                     const std::string& label, SuiteOutput& out, const Eigen::VectorXcd* signs = nullptr) {
  const InterpolationSystem sys = build_system(support, fc);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(support.size()));
  if (signs) {
    v = *signs;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<Real> phase(0.0, 2.0 * std::numbers::pi);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::polar(1.0, phase(rng));
  }
  const auto sys_checks = system_checks(sys);
  bool pass = true;
  for (const auto& c : sys_checks) pass &= c.pass;
  const Certificate sign = build_sign_certificate(sys, v);
  const CertificateReport sign_report = verify_sign_certificate(sign, kNearRadius, grid_step);
  pass &= sign_report.all_pass();
  Json localizers = Json::array();
  std::string csv = checks_csv(label + " system", fc, sys_checks) + checks_csv(label + " sign", fc, sign_report.checks);
  for (std::size_t j = 0; j < support.size(); ++j) {
    const CertificateReport r = verify_localizer(build_localizer(sys, support[j]), kNearRadius, grid_step);
    pass &= r.all_pass();
    Json lj = to_json(r);
    lj["anchor"] = j;
    localizers.push_back(lj);
    csv += checks_csv(label + " localizer " + std::to_string(j), fc, r.checks);
  }
  Json sc = Json::array();
  for (const auto& c : sys_checks)
    sc.push_back({{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
  out.json.push_back({{"label", label},
                      {"fc", fc},
                      {"support", support.points()},
                      {"system", sc},
                      {"sign", to_json(sign_report)},
                      {"localizers", localizers},
                      {"pass", pass}});
  out.csv += csv;
  out.pass &= pass;
}

int cmd_solve(const Common& o, const std::string& input) {
  const SpectrumVector y = spectrum_from_json(read_json_file(input));
  const RecoveryResult r = solve_tv(y, o.delta, solver_options(o));
  if (o.format == "csv") {
    std::string s = "t,re,im\n";
    char buf[128];
    for (const auto& sp : r.estimate) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sp.t, sp.amplitude.real(), sp.amplitude.imag());
      s += buf;
    }
    emit(o, s);
  } else {
    emit(o, to_json(r).dump(2));
  }
  return r.diagnostics.feasible && r.diagnostics.converged ? 0 : 1;
}

int cmd_certify(const Common& o, const std::string& input) {
  const int fc = single_fc(o, "certify");
  const Json j = read_json_file(input);
  const SupportSet support = support_from_json(j);
  SuiteOutput out;
  if (j.is_object() && j.contains("spikes")) {
    // Sign pattern from the measure's amplitudes.
    const AtomicMeasure x = measure_from_json(j);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v(i) = x[i].amplitude / std::abs(x[i].amplitude);
    certify_support(support, fc, o.grid_step / fc, o.seed, "input", out, &v);
  } else {
    certify_support(support, fc, o.grid_step / fc, o.seed, "input", out);
  }
  if (o.format == "csv")
    emit(o, "suite,fc,check,measured,bound,pass\n" + out.csv);
  else
    emit(o, Json{{"certificates", out.json}, {"pass", out.pass}}.dump(2));
  return out.pass ? 0 : 1;
}

int cmd_verify_bounds(const Common& o, bool kernel_only) {
  if (o.fc.empty()) throw Error("verify-bounds: at least one --fc is required");
  Json reports = Json::array();
  std::string csv = "suite,fc,check,measured,bound,pass\n";
  bool pass = true;
  for (int fc : o.fc) {
    const Kernel kernel(fc);
    const KernelBoundReport kr = verify_kernel_bounds(kernel, kNearRadius, o.grid_step / fc);
    bool fc_pass = kr.all_pass();
    csv += checks_csv("kernel", fc, kernel_checks(kr));
    Json entry = {{"fc", fc}, {"kernel", to_json(kr)}};
    if (!kernel_only) {
      SuiteOutput suite;
      // Equispaced at exactly 2/fc, and one random support at the same separation.
      std::vector<Real> equi;
      for (int i = 0; i < fc / 2; ++i) equi.push_back(2.0 * i / fc);
      certify_support(SupportSet(equi), fc, o.grid_step / fc, o.seed, "equispaced", suite);
      const AtomicMeasure x = generate_instance(fc, std::max(1, fc / 8), 1.0, {}, derive_seed(o.seed, fc, 0));
      certify_support(x.support(), fc, o.grid_step / fc, o.seed, "random", suite);
      entry["certificates"] = suite.json;
      csv += suite.csv;
      fc_pass &= suite.pass;
    }
    entry["pass"] = fc_pass;
    pass &= fc_pass;
    reports.push_back(entry);
  }
  emit(o, o.format == "csv" ? csv : Json{{"reports", reports}, {"pass", pass}}.dump(2));
  return pass ? 0 : 1;
}

int cmd_experiment(Common o, bool resume) {
  if (o.config.empty()) throw Error("experiment: --config is required");
  ExperimentConfig cfg = config_from_json(read_json_file(o.config));
  apply_env_overrides(cfg);
  if (o.seed != 0) cfg.seed = o.seed;
  if (!o.out.empty()) {
    cfg.csv_path = o.out + ".csv";
    cfg.jsonl_path = o.out + ".jsonl";
  }
  if (!resume) {
    if (!cfg.csv_path.empty()) std::remove(cfg.csv_path.c_str());
    if (!cfg.jsonl_path.empty()) std::remove(cfg.jsonl_path.c_str());
  }
  const bool to_stdout = cfg.csv_path.empty() && cfg.jsonl_path.empty();
  if (to_stdout && o.format == "csv") std::cout << csv_header() << "\n";
  bool pass = true;
  run_experiment(cfg, [&](const TrialRecord& r) {
    pass &= r.ok && r.diagnostics.feasible;
    if (to_stdout) std::cout << (o.format == "csv" ? csv_row(r) : to_json(r).dump()) << "\n" << std::flush;
  });
  return pass ? 0 : 1;
}

int cmd_oracle(const Common& o, const std::string& input, int grid) {
  const Json j = read_json_file(input);
  SpectrumVector y;
  Json truth;
  if (j.contains("spikes")) {
    const AtomicMeasure x = measure_from_json(j);
    y = lowpass_sample(x, single_fc(o, "oracle"));
    truth = to_json(x);
  } else {
    y = spectrum_from_json(j);
  }
  const RecoveryResult tv = solve_tv(y, o.delta, solver_options(o));
  const OracleResult orc = grid_l1_oracle(y, o.delta, grid);
  const Real rel = std::abs(orc.objective - tv.dual.objective) / std::max(1.0, std::abs(tv.dual.objective));
  const bool pass = orc.converged && rel <= 1e-3;
  Json out = {{"grid_size", grid},
              {"tv", to_json(tv)},
              {"oracle", to_json(orc)},
              {"relative_objective_difference", rel},
              {"pass", pass}};
  if (!truth.is_null()) out["truth"] = truth;
  emit(o, out.dump(2));
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Super-resolution by total-variation minimization"};
  app.require_subcommand(1);
  Common o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--out", o.out, "Output path (stdout when omitted)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--fc", o.fc, "Cutoff frequency (repeatable)");
    sub->add_option("--delta", o.delta, "Noise level")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--grid-step", o.grid_step, "Verification grid step in units of lambda_c")
        ->check(CLI::PositiveNumber);
  };

  std::string input;
  auto* solve = app.add_subcommand("solve", "Recover a measure from spectrum JSON");
  add_common(solve);
  solve->add_option("input", input, "Spectrum JSON")->required();

  auto* certify = app.add_subcommand("certify", "Build and verify certificates for a support");
  add_common(certify);
  certify->add_option("input", input, "Support or measure JSON")->required();

  bool kernel_only = false;
  auto* verify = app.add_subcommand("verify-bounds", "Kernel bounds and certificate invariants");
  add_common(verify);
  verify->add_flag("--kernel-only", kernel_only, "Skip the certificate suite");

  bool resume = false;
  auto* experiment = app.add_subcommand("experiment", "Run a configured sweep");
  add_common(experiment);
  experiment->add_flag("--resume", resume, "Keep complete cells of existing outputs");

  int grid = 1 << 14;
  auto* oracle = app.add_subcommand("oracle", "Grid l1 cross-check");
  add_common(oracle);
  oracle->add_option("input", input, "Measure JSON (with --fc) or spectrum JSON")->required();
  oracle->add_option("--grid", grid, "Grid size")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return cmd_solve(o, input);
    if (*certify) return cmd_certify(o, input);
    if (*verify) return cmd_verify_bounds(o, kernel_only);
    if (*experiment) return cmd_experiment(o, resume);
    if (*oracle) return cmd_oracle(o, input, grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
