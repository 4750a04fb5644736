#include "srlab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace srlab {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string num(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_csv(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::string region_name(KernelRegion r) { return r == KernelRegion::Near ? "near" : "far"; }

Json checks_json(const std::vector<PropertyCheck>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
  return arr;
}

// Non-finite values are not representable in JSON; they are written as null.
Json finite_or_null(Real v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const AtomicMeasure& x) {
  Json spikes = Json::array();
  for (const auto& s : x)
    spikes.push_back({{"t", s.t}, {"re", s.amplitude.real()}, {"im", s.amplitude.imag()}});
  return {{"spikes", spikes}};
}

AtomicMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("spikes") || !j["spikes"].is_array())
    throw Error("measure JSON: expected an object with a \"spikes\" array");
  std::vector<Spike> spikes;
  for (const auto& s : j["spikes"]) {
    if (!s.contains("t")) throw Error("measure JSON: spike without \"t\"");
    spikes.push_back({s["t"].get<Real>(), Complex(s.value("re", 0.0), s.value("im", 0.0))});
  }
  return AtomicMeasure(std::move(spikes));
}

Json to_json(const SpectrumVector& y) {
  Json coeffs = Json::array();
  for (int i = 0; i < y.size(); ++i) coeffs.push_back(complex_pair(y.coeffs(i)));
  return {{"fc", y.fc}, {"coeffs", coeffs}};
}

SpectrumVector spectrum_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("fc") || !j.contains("coeffs"))
    throw Error("spectrum JSON: expected \"fc\" and \"coeffs\"");
  const int fc = j["fc"].get<int>();
  const auto& arr = j["coeffs"];
  if (!arr.is_array()) throw Error("spectrum JSON: \"coeffs\" must be an array");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& p = arr[i];
    if (p.is_number())
      c(i) = Complex(p.get<Real>(), 0.0);
    else if (p.is_array() && p.size() == 2)
      c(i) = Complex(p[0].get<Real>(), p[1].get<Real>());
    else
      throw Error("spectrum JSON: coefficient must be [re, im]");
  }
  return SpectrumVector(fc, std::move(c));
}

SupportSet support_from_json(const Json& j) {
  if (j.is_array()) return SupportSet(j.get<std::vector<Real>>());
  if (j.is_object() && j.contains("points")) return SupportSet(j["points"].get<std::vector<Real>>());
  if (j.is_object() && j.contains("spikes")) return measure_from_json(j).support();
  throw Error("support JSON: expected \"points\" or \"spikes\"");
}

Json to_json(const KernelBoundReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"region", region_name(c.region)},
                      {"order", c.order},
                      {"name", c.name},
                      {"measured", c.measured},
                      {"bound", c.bound},
                      {"kind", c.lower ? "lower" : "upper"},
                      {"pass", c.pass}});
  return {{"fc", r.fc}, {"c", r.c}, {"grid_step", r.grid_step}, {"checks", checks},
          {"pass", r.all_pass()}};
}

Json to_json(const Certificate& q) {
  Json alpha = Json::array(), beta = Json::array(), targets = Json::array();
  for (Eigen::Index i = 0; i < q.alpha.size(); ++i) {
    alpha.push_back(complex_pair(q.alpha(i)));
    beta.push_back(complex_pair(q.beta(i)));
    targets.push_back(complex_pair(q.targets(i)));
  }
  Json j = {{"kind", to_string(q.kind)},
            {"fc", q.fc},
            {"support", q.support.points()},
            {"targets", targets},
            {"alpha", alpha},
            {"beta", beta},
            {"route_discrepancy", q.route_discrepancy},
            {"fourier", to_json(q.fourier)}};
  if (q.kind == CertificateKind::Localizer) j["anchor"] = q.anchor;
  return j;
}

Json to_json(const CertificateReport& r) {
  Json j = {{"kind", to_string(r.kind)},
            {"fc", r.fc},
            {"support_size", r.support_size},
            {"global_sup", r.global_sup},
            {"checks", checks_json(r.checks)},
            {"pass", r.all_pass()}};
  if (r.kind == CertificateKind::Sign) {
    j["measured_ca"] = r.measured_ca;
    j["measured_cb"] = r.measured_cb;
  }
  return j;
}

Json to_json(const RecoveryDiagnostics& d) {
  return {{"iterations", d.iterations},       {"converged", d.converged},
          {"primal_residual", d.primal_residual}, {"dual_residual", d.dual_residual},
          {"residual_norm", d.residual_norm}, {"feasible", d.feasible},
          {"degenerate", d.degenerate},       {"refined", d.refined},
          {"unit_roots", d.unit_roots},       {"wall_seconds", d.wall_seconds}};
}

Json to_json(const RecoveryResult& r) {
  return {{"estimate", to_json(r.estimate)},
          {"dual", {{"objective", r.dual.objective}, {"raw_sup", r.dual.raw_sup}, {"c", to_json(r.dual.c)}}},
          {"diagnostics", to_json(r.diagnostics)}};
}

Json to_json(const OracleResult& r) {
  return {{"estimate", to_json(r.estimate)}, {"objective", r.objective},
          {"dual_objective", r.dual_objective}, {"gap", r.gap},
          {"iterations", r.iterations},       {"converged", r.converged}};
}

Json to_json(const GuaranteeReport& r) {
  Json loc = Json::array();
  for (Real v : r.location_errors) loc.push_back(finite_or_null(v));
  return {{"fc", r.fc},
          {"delta", r.delta},
          {"c", r.c},
          {"amplitude_errors", r.amplitude_errors},
          {"displacement", r.displacement},
          {"displacement_normalized", r.displacement_normalized},
          {"spurious_mass", r.spurious_mass},
          {"location_errors", loc},
          {"owners", r.owners},
          {"ratio_i", r.ratio_i()},
          {"ratio_ii", r.ratio_ii()},
          {"ratio_iii", r.ratio_iii()}};
}

Json to_json(const TrialRecord& r) {
  Json j = {{"cell", r.cell.index},
            {"fc", r.cell.fc},
            {"k", r.cell.spike_count},
            {"delta_value", r.cell.delta_value},
            {"trial", r.trial},
            {"seed", r.seed},
            {"delta", r.delta},
            {"separation", finite_or_null(r.separation)},
            {"ok", r.ok},
            {"truth", to_json(r.truth)}};
  if (r.ok) {
    j["estimate"] = to_json(r.estimate);
    j["guarantees"] = to_json(r.guarantees);
    j["diagnostics"] = to_json(r.diagnostics);
  } else {
    j["error"] = r.error;
  }
  return j;
}

Json to_json(const SolverOptions& o) {
  return {{"penalty", o.penalty},
          {"max_iterations", o.max_iterations},
          {"tolerance", o.tolerance},
          {"support_threshold", o.support_threshold},
          {"root_modulus_window", o.root_modulus_window},
          {"cluster_radius", o.cluster_radius},
          {"prune_fraction", o.prune_fraction},
          {"feasibility_tolerance", o.feasibility_tolerance},
          {"balance_interval", o.balance_interval},
          {"balance_ratio", o.balance_ratio},
          {"balance_until", o.balance_until}};
}

SolverOptions solver_options_from_json(const Json& j) {
  SolverOptions o;
  for (const auto& [key, v] : j.items()) {
    if (key == "penalty") o.penalty = v.get<Real>();
    else if (key == "max_iterations") o.max_iterations = v.get<int>();
    else if (key == "tolerance") o.tolerance = v.get<Real>();
    else if (key == "support_threshold") o.support_threshold = v.get<Real>();
    else if (key == "root_modulus_window") o.root_modulus_window = v.get<Real>();
    else if (key == "cluster_radius") o.cluster_radius = v.get<Real>();
    else if (key == "prune_fraction") o.prune_fraction = v.get<Real>();
    else if (key == "feasibility_tolerance") o.feasibility_tolerance = v.get<Real>();
    else if (key == "balance_interval") o.balance_interval = v.get<int>();
    else if (key == "balance_ratio") o.balance_ratio = v.get<Real>();
    else if (key == "balance_until") o.balance_until = v.get<int>();
    else throw Error("solver options: unknown key \"" + key + "\"");
  }
  return o;
}

Json to_json(const ExperimentConfig& c) {
  return {{"fc", c.fc},
          {"spike_counts", c.spike_counts},
          {"sep_mult", c.sep_mult},
          {"amplitudes",
           {{"model", to_string(c.amplitudes.model)}, {"m_min", c.amplitudes.m_min}, {"m_max", c.amplitudes.m_max}}},
          {"deltas", c.deltas},
          {"delta_kind", c.delta_kind == DeltaKind::Relative ? "relative" : "absolute"},
          {"noise_mode", to_string(c.noise_mode)},
          {"trials", c.trials},
          {"seed", c.seed},
          {"csv", c.csv_path},
          {"jsonl", c.jsonl_path},
          {"workers", c.workers},
          {"solver", to_json(c.solver)}};
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("config: expected a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "fc") c.fc = v.get<std::vector<int>>();
    else if (key == "spike_counts") c.spike_counts = v.get<std::vector<int>>();
    else if (key == "sep_mult") c.sep_mult = v.get<Real>();
    else if (key == "amplitudes") {
      c.amplitudes.model = parse_amplitude_model(v.value("model", std::string("unit_modulus")));
      c.amplitudes.m_min = v.value("m_min", 1.0);
      c.amplitudes.m_max = v.value("m_max", 1.0);
    } else if (key == "deltas") c.deltas = v.get<std::vector<Real>>();
    else if (key == "delta_kind") {
      const auto s = v.get<std::string>();
      if (s == "relative") c.delta_kind = DeltaKind::Relative;
      else if (s == "absolute") c.delta_kind = DeltaKind::Absolute;
      else throw Error("config: delta_kind must be \"relative\" or \"absolute\"");
    } else if (key == "noise_mode") c.noise_mode = parse_noise_mode(v.get<std::string>());
    else if (key == "trials") c.trials = v.get<int>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "csv") c.csv_path = v.get<std::string>();
    else if (key == "jsonl") c.jsonl_path = v.get<std::string>();
    else if (key == "workers") c.workers = v.get<int>();
    else if (key == "solver") c.solver = solver_options_from_json(v);
    else throw Error("config: unknown key \"" + key + "\"");
  }
  c.validate();
  return c;
}

void apply_env_overrides(ExperimentConfig& c) {
  if (const char* s = std::getenv("SRLAB_SEED")) {
    try {
      c.seed = std::stoull(s);
    } catch (const std::exception&) {
      throw Error(std::string("SRLAB_SEED is not an unsigned integer: ") + s);
    }
  }
  if (const char* o = std::getenv("SRLAB_OUT")) {
    c.csv_path = std::string(o) + ".csv";
    c.jsonl_path = std::string(o) + ".jsonl";
  }
}

std::string csv_header() {
  return "# schema=1\n"
         "cell,trial,seed,fc,k,delta_value,delta,separation,ok,n_estimate,max_amplitude_error,"
         "displacement_normalized,spurious_mass,ratio_i,ratio_ii,ratio_iii,max_location_error,"
         "iterations,converged,feasible,residual_norm,error";
}

std::string csv_row(const TrialRecord& r) {
  std::ostringstream s;
  s << r.cell.index << ',' << r.trial << ',' << r.seed << ',' << r.cell.fc << ',' << r.cell.spike_count
    << ',' << num(r.cell.delta_value) << ',' << num(r.delta) << ',' << num(r.separation) << ','
    << (r.ok ? 1 : 0) << ',';
  if (r.ok) {
    const auto& g = r.guarantees;
    Real loc = 0.0;
    for (Real v : g.location_errors) loc = std::max(loc, v);
    s << r.estimate.size() << ',' << num(g.max_amplitude_error()) << ',' << num(g.displacement_normalized)
      << ',' << num(g.spurious_mass) << ',' << num(g.ratio_i()) << ',' << num(g.ratio_ii()) << ','
      << num(g.ratio_iii()) << ',' << num(loc) << ',' << r.diagnostics.iterations << ','
      << (r.diagnostics.converged ? 1 : 0) << ',' << (r.diagnostics.feasible ? 1 : 0) << ','
      << num(r.diagnostics.residual_norm) << ",";
  } else {
    s << ",,,,,,,,,,,," << quote_csv(r.error);
  }
  return s.str();
}

int csv_row_cell(const std::string& line) {
  if (line.empty() || line[0] == '#' || line.rfind("cell,", 0) == 0) return -1;
  try {
    return std::stoi(line.substr(0, line.find(',')));
  } catch (const std::exception&) {
    return -1;
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace srlab
