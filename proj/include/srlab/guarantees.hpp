#pragma once

#include <vector>

#include "srlab/kernel.hpp"
#include "srlab/measures.hpp"

namespace srlab {

/// For each estimated spike, the index of the true spike within c*lambda_c
/// that owns it (the nearest one), or -1 if it is spurious.
std::vector<int> assign_estimates(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                                  Real c = kNearRadius);

/// |a_j - sum of estimated amplitudes within c*lambda_c of t_j|, per true spike.
std::vector<Real> property_i(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                             Real c = kNearRadius);

/// sum over owned estimates of |a_hat_l| * dist(t_hat_l, t_j)^2 (raw units).
Real property_ii(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                 Real c = kNearRadius);

/// Total |a_hat_l| over estimated spikes farther than c*lambda_c from all of T.
Real property_iii(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                  Real c = kNearRadius);

struct CorollaryRecord {
  Real t;
  Real amplitude;
  /// Distance from t to the nearest estimated spike (infinite if none).
  Real distance;
  /// sqrt(C2 delta / (|a| - C1 delta)) * lambda_c; only meaningful when applicable.
  Real bound;
  /// |a| > C1 delta.
  bool applicable;
  bool within;
};

std::vector<CorollaryRecord> corollary_check(const AtomicMeasure& truth, const AtomicMeasure& estimate,
                                             int fc, Real delta, Real c1, Real c2);

struct GuaranteeReport {
  int fc = 0;
  Real delta = 0.0;
  Real c = kNearRadius;
  std::vector<Real> amplitude_errors;
  Real displacement = 0.0;
  /// displacement / lambda_c^2.
  Real displacement_normalized = 0.0;
  Real spurious_mass = 0.0;
  /// Nearest-estimate distance per true spike, in units of lambda_c.
  std::vector<Real> location_errors;
  std::vector<int> owners;

  Real max_amplitude_error() const;
  /// Ratios metric / delta (metric / (lambda^2 delta) for the displacement);
  /// zero when delta is zero.
  Real ratio_i() const;
  Real ratio_ii() const;
  Real ratio_iii() const;
};

GuaranteeReport guarantee_report(const AtomicMeasure& truth, const AtomicMeasure& estimate, int fc,
                                 Real delta, Real c = kNearRadius);

}  // namespace srlab
