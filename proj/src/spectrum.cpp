#include "srlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/FFT>

#include "srlab/kernel.hpp"

namespace srlab {

namespace {
constexpr Real kTwoPi = 2.0 * std::numbers::pi;
}

SpectrumVector::SpectrumVector(int cutoff, Eigen::VectorXcd c) : fc(cutoff), coeffs(std::move(c)) {
  if (fc < 0) throw Error("cutoff frequency must be nonnegative");
  if (coeffs.size() != 2 * fc + 1) throw Error("spectrum length must equal 2*fc+1");
}

SpectrumVector SpectrumVector::zeros(int cutoff) {
  return SpectrumVector(cutoff, Eigen::VectorXcd::Zero(2 * cutoff + 1));
}

SpectrumVector lowpass_sample(const AtomicMeasure& x, int fc) {
  SpectrumVector y = SpectrumVector::zeros(fc);
  for (const auto& s : x) {
    // Exact phases per k; recurrence would accumulate rounding across 2fc+1 terms.
    for (int k = -fc; k <= fc; ++k) y.at(k) += s.amplitude * std::polar(1.0, -kTwoPi * k * s.t);
  }
  return y;
}

NoiseMode parse_noise_mode(const std::string& name) {
  if (name == "spherical-random") return NoiseMode::SphericalRandom;
  if (name == "single-coefficient") return NoiseMode::SingleCoefficient;
  if (name == "adversarial-file") return NoiseMode::AdversarialFile;
  throw Error("unknown noise mode: " + name);
}

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::SphericalRandom: return "spherical-random";
    case NoiseMode::SingleCoefficient: return "single-coefficient";
    case NoiseMode::AdversarialFile: return "adversarial-file";
  }
  return "unknown";
}

SpectrumVector make_noise(int fc, const NoiseSpec& spec) {
  if (!(spec.delta >= 0.0)) throw Error("noise radius must be nonnegative");
  SpectrumVector z = SpectrumVector::zeros(fc);
  if (spec.delta == 0.0) return z;
  switch (spec.mode) {
    case NoiseMode::SphericalRandom: {
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<Real> normal;
      Real norm = 0.0;
      while (norm == 0.0) {
        for (int i = 0; i < z.size(); ++i) z.coeffs(i) = Complex(normal(rng), normal(rng));
        norm = z.coeffs.norm();
      }
      z.coeffs *= spec.delta / norm;
      break;
    }
    case NoiseMode::SingleCoefficient:
      z.at(0) = spec.delta;
      break;
    case NoiseMode::AdversarialFile: {
      if (!spec.file_noise) throw Error("adversarial-file noise requires a noise vector");
      if (spec.file_noise->fc != fc) throw Error("noise file length does not match 2*fc+1");
      z.coeffs = spec.file_noise->coeffs;
      const Real norm = z.coeffs.norm();
      if (norm > spec.delta) z.coeffs *= spec.delta / norm;
      break;
    }
  }
  return z;
}

SpectrumVector add_noise(const SpectrumVector& y, const NoiseSpec& spec) {
  SpectrumVector out = y;
  out.coeffs += make_noise(y.fc, spec).coeffs;
  return out;
}

Complex eval_trig_poly(const SpectrumVector& b, Real t) { return eval_trig_poly(b, t, 0); }

Complex eval_trig_poly(const SpectrumVector& b, Real t, int order) {
  // Horner in z = e^{i2pi t} on the coefficients weighted by (i2pi k)^order.
  const Complex z = std::polar(1.0, kTwoPi * t);
  Complex acc = 0.0;
  for (int k = b.fc; k >= -b.fc; --k) {
    Complex w = b.at(k);
    if (order > 0) w *= std::pow(Complex(0.0, kTwoPi * k), order);
    acc = acc * z + w;
  }
  return acc * std::pow(z, -b.fc);
}

Eigen::VectorXcd eval_trig_poly_grid(const SpectrumVector& b, int grid_size, int order) {
  if (grid_size < 2 * b.fc + 1) throw Error("grid too coarse for the polynomial degree");
  // p(m/N) = sum_k b_k w^{km}, w = e^{i2pi/N}: an inverse DFT of the wrapped coefficients.
  std::vector<Complex> spec(grid_size, Complex(0.0));
  for (int k = -b.fc; k <= b.fc; ++k) {
    Complex w = b.at(k);
    if (order > 0) w *= std::pow(Complex(0.0, kTwoPi * k), order);
    spec[(k + grid_size) % grid_size] += w;
  }
  std::vector<Complex> values;
  Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::Unscaled);
  fft.inv(values, spec);
  return Eigen::Map<Eigen::VectorXcd>(values.data(), grid_size);
}

Real trig_poly_sup(const SpectrumVector& b, int grid_size) {
  const Eigen::VectorXcd v = eval_trig_poly_grid(b, grid_size);
  const int n = grid_size;
  std::vector<std::pair<Real, int>> peaks;
  Real sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const Real a = std::abs(v(i));
    sup = std::max(sup, a);
    if (a >= std::abs(v((i + n - 1) % n)) && a >= std::abs(v((i + 1) % n))) peaks.emplace_back(a, i);
  }
  std::sort(peaks.begin(), peaks.end(), std::greater<>());
  const Real h = 1.0 / n;
  for (std::size_t p = 0; p < std::min<std::size_t>(peaks.size(), 8); ++p) {
    const Real center = peaks[p].second * h;
    sup = std::max(sup, refined_max([&](Real t) { return std::abs(eval_trig_poly(b, t)); },
                                    center - h, center + h, h));
  }
  return sup;
}

Complex coefficient_inner(const SpectrumVector& b, const SpectrumVector& c) {
  if (b.fc != c.fc) throw Error("coefficient_inner: cutoff mismatch");
  return c.coeffs.dot(b.coeffs);
}

}  // namespace srlab
