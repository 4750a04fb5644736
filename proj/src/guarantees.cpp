#include "srlab/guarantees.hpp"

#include <algorithm>
#include <cmath>

namespace srlab {

std::vector<int> assign_estimates(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                                  Real c) {
  const Real radius = c / fc;
  std::vector<int> owners(estimate.size(), -1);
  for (std::size_t l = 0; l < estimate.size(); ++l) {
    Real best = std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const Real d = wrap_distance(estimate[l].t, truth[j].t);
      // Boundary points belong to the near region.
      if (d <= radius && d < best) {
        best = d;
        owners[l] = static_cast<int>(j);
      }
    }
  }
  return owners;
}

std::vector<Real> property_i(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                             Real c) {
  if (truth.empty()) throw Error("property_i: empty truth");
  const auto owners = assign_estimates(truth, estimate, fc, c);
  std::vector<Complex> gathered(truth.size(), Complex(0.0));
  for (std::size_t l = 0; l < estimate.size(); ++l)
    if (owners[l] >= 0) gathered[owners[l]] += estimate[l].amplitude;
  std::vector<Real> err(truth.size());
  for (std::size_t j = 0; j < truth.size(); ++j) err[j] = std::abs(truth[j].amplitude - gathered[j]);
  return err;
}

Real property_ii(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc, Real c) {
  const auto owners = assign_estimates(truth, estimate, fc, c);
  Real sum = 0.0;
  for (std::size_t l = 0; l < estimate.size(); ++l) {
    if (owners[l] < 0) continue;
    const Real d = wrap_distance(estimate[l].t, truth[owners[l]].t);
    sum += std::abs(estimate[l].amplitude) * d * d;
  }
  return sum;
}

Real property_iii(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc, Real c) {
  const auto owners = assign_estimates(truth, estimate, fc, c);
  Real sum = 0.0;
  for (std::size_t l = 0; l < estimate.size(); ++l)
    if (owners[l] < 0) sum += std::abs(estimate[l].amplitude);
  return sum;
}

std::vector<CorollaryRecord> corollary_check(const AtomicMeasure& truth, const AtomicMeasure& estimate,
                                             int fc, Real delta, Real c1, Real c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error("corollary_check: constants must be positive");
  const Real lambda = 1.0 / fc;
  std::vector<CorollaryRecord> out;
  for (const auto& s : truth) {
    CorollaryRecord r{s.t, std::abs(s.amplitude), std::numeric_limits<Real>::infinity(), 0.0, false,
                      false};
    for (const auto& e : estimate) r.distance = std::min(r.distance, wrap_distance(s.t, e.t));
    r.applicable = r.amplitude > c1 * delta;
    if (r.applicable) {
      r.bound = std::sqrt(c2 * delta / (r.amplitude - c1 * delta)) * lambda;
      r.within = r.distance <= r.bound;
    }
    out.push_back(r);
  }
  return out;
}

Real GuaranteeReport::max_amplitude_error() const {
  return amplitude_errors.empty() ? 0.0
                                  : *std::max_element(amplitude_errors.begin(), amplitude_errors.end());
}

Real GuaranteeReport::ratio_i() const { return delta > 0.0 ? max_amplitude_error() / delta : 0.0; }
Real GuaranteeReport::ratio_ii() const {
  return delta > 0.0 ? displacement_normalized / delta : 0.0;
}
Real GuaranteeReport::ratio_iii() const { return delta > 0.0 ? spurious_mass / delta : 0.0; }

GuaranteeReport guarantee_report(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                                 Real delta, Real c) {
  GuaranteeReport r;
  r.fc = fc;
  r.delta = delta;
  r.c = c;
  r.owners = assign_estimates(truth, estimate, fc, c);
  r.amplitude_errors = property_i(truth, estimate, fc, c);
  r.displacement = property_ii(truth, estimate, fc, c);
  r.displacement_normalized = r.displacement * fc * fc;
  r.spurious_mass = property_iii(truth, estimate, fc, c);
  for (const auto& s : truth) {
    Real d = std::numeric_limits<Real>::infinity();
    for (const auto& e : estimate) d = std::min(d, wrap_distance(s.t, e.t));
    r.location_errors.push_back(d * fc);
  }
  return r;
}

}  // namespace srlab
