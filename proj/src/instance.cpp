#include <cmath>
#include <numbers>
#include <random>

#include "srlab/harness.hpp"

namespace srlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(seed) ^ cell) ^ trial);
}

AmplitudeModel parse_amplitude_model(const std::string& name) {
  if (name == "unit" || name == "unit_modulus") return AmplitudeModel::UnitModulus;
  if (name == "log_uniform") return AmplitudeModel::LogUniform;
  throw Error("unknown amplitude model: " + name);
}

std::string to_string(AmplitudeModel model) {
  return model == AmplitudeModel::UnitModulus ? "unit_modulus" : "log_uniform";
}

AtomicMeasure generate_instance(int fc, int k, Real sep_mult, const AmplitudeSpec& amplitudes,
                                std::uint64_t seed) {
  if (fc < 1) throw Error("generate_instance: fc must be positive");
  if (k < 1) throw Error("generate_instance: spike count must be positive");
  if (!(sep_mult >= 1.0)) throw Error("generate_instance: separation multiplier must be >= 1");
  const Real sep = sep_mult * 2.0 / fc;
  if (!(k * sep < 1.0)) throw Error("generate_instance: spike count not satisfiable at this separation");
  if (amplitudes.model == AmplitudeModel::LogUniform &&
      !(amplitudes.m_min > 0.0 && amplitudes.m_min <= amplitudes.m_max))
    throw Error("generate_instance: need 0 < m_min <= m_max");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  // Margin so that min_separation, computed from sorted differences, agrees.
  const Real accept = sep * (1.0 + 1e-12);
  std::vector<Real> t;
  int attempts = 0;
  while (static_cast<int>(t.size()) < k) {
    if (++attempts > kMaxPlacementAttempts)
      throw Error("generate_instance: placement attempt cap exceeded");
    const Real s = unit(rng);
    bool ok = true;
    for (Real u : t)
      if (wrap_distance(s, u) < accept) {
        ok = false;
        break;
      }
    if (ok) t.push_back(s);
  }

  std::vector<Spike> spikes;
  for (Real s : t) {
    Real mag = 1.0;
    if (amplitudes.model == AmplitudeModel::LogUniform)
      mag = std::exp(std::log(amplitudes.m_min) +
                     unit(rng) * (std::log(amplitudes.m_max) - std::log(amplitudes.m_min)));
    const Real phase = 2.0 * std::numbers::pi * unit(rng);
    spikes.push_back({s, std::polar(mag, phase)});
  }
  return AtomicMeasure(std::move(spikes));
}

}  // namespace srlab
