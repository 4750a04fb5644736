#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "srlab/measures.hpp"

namespace srlab {

/// The 2*fc+1 low-pass Fourier coefficients, stored k-ascending (k = -fc..fc).
struct SpectrumVector {
  int fc = 0;
  Eigen::VectorXcd coeffs;

  SpectrumVector() = default;
  SpectrumVector(int cutoff, Eigen::VectorXcd c);
  static SpectrumVector zeros(int cutoff);

  int size() const { return static_cast<int>(coeffs.size()); }
  Complex& at(int k) { return coeffs(k + fc); }
  Complex at(int k) const { return coeffs(k + fc); }
};

/// coeffs[k] = sum_j a_j exp(-i 2 pi k t_j).
SpectrumVector lowpass_sample(const AtomicMeasure& x, int fc);

enum class NoiseMode { SphericalRandom, SingleCoefficient, AdversarialFile };

struct NoiseSpec {
  Real delta = 0.0;
  NoiseMode mode = NoiseMode::SphericalRandom;
  std::uint64_t seed = 0;
  /// Required for AdversarialFile: the raw perturbation z.
  std::optional<SpectrumVector> file_noise;
};

/// Returns y + z with ||z||_2 <= spec.delta.
SpectrumVector add_noise(const SpectrumVector& y, const NoiseSpec& spec);

/// The perturbation add_noise would apply, on its own.
SpectrumVector make_noise(int fc, const NoiseSpec& spec);

NoiseMode parse_noise_mode(const std::string& name);
std::string to_string(NoiseMode mode);

/// sum_k b_k exp(i 2 pi k t) for b indexed k = -fc..fc.
Complex eval_trig_poly(const SpectrumVector& b, Real t);

/// d^order/dt^order of the polynomial.
Complex eval_trig_poly(const SpectrumVector& b, Real t, int order);

/// Values at t_m = m / grid_size, m = 0..grid_size-1, through a zero-padded FFT.
/// Requires grid_size >= 2*fc+1.
Eigen::VectorXcd eval_trig_poly_grid(const SpectrumVector& b, int grid_size, int order = 0);

/// sup_t |p(t)| from a grid_size-point FFT scan with golden-section
/// refinement of the largest local maxima.
Real trig_poly_sup(const SpectrumVector& b, int grid_size);

/// sum_k b_k conj(c_k).
Complex coefficient_inner(const SpectrumVector& b, const SpectrumVector& c);

}  // namespace srlab
