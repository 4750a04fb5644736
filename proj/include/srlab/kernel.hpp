#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srlab/measures.hpp"

namespace srlab {

/// Half-width constant c of the near region |t| <= c * lambda_c.
inline constexpr Real kNearRadius = 0.1649;

namespace detail {

/// H(t) = sin(M pi t) / (M sin(pi t)) and its first three t-derivatives.
///
/// Inside the main lobe the finite cosine sum
///   H(t) = (1/M) sum_{j<M} cos(pi (M-1-2j) t)
/// is used; the quotient form cancels catastrophically as t -> 0 for the
/// higher derivatives. t must already be reduced to [-1/2, 1/2].
template <typename Scalar>
std::array<Scalar, 4> dirichlet_derivatives(int M, Scalar t) {
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar pi = Scalar(std::numbers::pi_v<long double>);
  std::array<Scalar, 4> h{};
  if (abs(t) * Scalar(4 * M) < Scalar(1)) {
    for (int j = 0; j < M; ++j) {
      const Scalar w = pi * Scalar(M - 1 - 2 * j);
      const Scalar c = cos(w * t), s = sin(w * t);
      h[0] += c;
      h[1] -= w * s;
      h[2] -= w * w * c;
      h[3] += w * w * w * s;
    }
    for (auto& v : h) v /= Scalar(M);
    return h;
  }
  const Scalar u = pi * t;
  const Scalar m = Scalar(M);
  const Scalar sm = sin(m * u), cm = cos(m * u);
  const Scalar su = sin(u), cu = cos(u);
  // Derivatives in u of numerator N = sin(Mu) and denominator D = M sin(u).
  const Scalar n1 = m * cm, n2 = -m * m * sm, n3 = -m * m * m * cm;
  const Scalar d0 = m * su, d1 = m * cu, d2 = -m * su, d3 = -m * cu;
  // Leibniz rule on H * D = N.
  const Scalar h0 = sm / d0;
  const Scalar h1 = (n1 - h0 * d1) / d0;
  const Scalar h2 = (n2 - Scalar(2) * h1 * d1 - h0 * d2) / d0;
  const Scalar h3 = (n3 - Scalar(3) * h2 * d1 - Scalar(3) * h1 * d2 - h0 * d3) / d0;
  h[0] = h0;
  h[1] = pi * h1;
  h[2] = pi * pi * h2;
  h[3] = pi * pi * pi * h3;
  return h;
}

/// K = H^4 and its first three derivatives from those of H.
template <typename Scalar>
std::array<Scalar, 4> fourth_power_derivatives(const std::array<Scalar, 4>& h) {
  const Scalar h2 = h[0] * h[0];
  const Scalar h3 = h2 * h[0];
  return {h2 * h2, Scalar(4) * h3 * h[1],
          Scalar(12) * h2 * h[1] * h[1] + Scalar(4) * h3 * h[2],
          Scalar(24) * h[0] * h[1] * h[1] * h[1] + Scalar(36) * h2 * h[1] * h[2] +
              Scalar(4) * h3 * h[3]};
}

}  // namespace detail

/// Derivatives of order 0..3 of K(t) = [sin(M pi t) / (M sin(pi t))]^4,
/// M = fc/2 + 1, with K(0) = 1. K is 1-periodic.
template <typename Scalar>
std::array<Scalar, 4> kernel_derivatives(int fc, Scalar t) {
  using std::floor;
  Scalar r = t - floor(t + Scalar(0.5));
  return detail::fourth_power_derivatives(detail::dirichlet_derivatives(fc / 2 + 1, r));
}

/// The low-pass interpolation kernel for a given even cutoff fc >= 10.
class Kernel {
 public:
  explicit Kernel(int fc);

  int fc() const { return fc_; }
  int half_order() const { return fc_ / 2 + 1; }
  Real lambda() const { return 1.0 / fc_; }

  /// K^{(order)}(t), order in 0..3.
  Real operator()(Real t, int order = 0) const;
  std::array<Real, 4> derivatives(Real t) const { return kernel_derivatives<Real>(fc_, t); }

  /// Fourier coefficients kappa_k, k = -fc..fc, with K(t) = sum kappa_k e^{i2pi k t}.
  const Eigen::VectorXd& fourier() const { return fourier_; }

 private:
  int fc_;
  Eigen::VectorXd fourier_;
};

/// Convenience wrapper matching Kernel(fc)(t, order).
Real kernel_eval(int fc, Real t, int order);

enum class KernelRegion { Near, Far };

struct KernelBoundCheck {
  KernelRegion region;
  int order;
  std::string name;
  /// Worst value over the region, in the normalized units of `bound`.
  Real measured;
  Real bound;
  /// True for lower bounds (measured >= bound), false for upper bounds.
  bool lower;
  bool pass;
};

struct KernelBoundReport {
  int fc;
  Real c;
  Real grid_step;
  std::vector<KernelBoundCheck> checks;

  bool all_pass() const;
};

/// Dense-grid check of the near/far kernel bounds with golden-section
/// refinement of each grid extremum. grid_step must be <= lambda_c / 200.
KernelBoundReport verify_kernel_bounds(const Kernel& kernel, Real c = kNearRadius,
                                       Real grid_step = 0.0);

std::string to_string(KernelRegion region);

/// Absolute slack granted to every normalized bound comparison.
inline constexpr Real kBoundSlack = 1e-9;

/// Largest value of f on [lo, hi], from a uniform scan with the given step and
/// golden-section refinement of every local maximum found by the scan.
template <typename F>
Real refined_max(F&& f, Real lo, Real hi, Real step) {
  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)) + 1);
  const Real h = (hi - lo) / (n - 1);
  std::vector<Real> v(n);
  for (int i = 0; i < n; ++i) v[i] = f(lo + h * i);
  Real best = -std::numeric_limits<Real>::infinity();
  const Real inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < n; ++i) {
    best = std::max(best, v[i]);
    const bool left_ok = i == 0 || v[i] >= v[i - 1];
    const bool right_ok = i == n - 1 || v[i] >= v[i + 1];
    if (!(left_ok && right_ok)) continue;
    Real a = lo + h * std::max(0, i - 1), b = lo + h * std::min(n - 1, i + 1);
    Real x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    Real f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + inv_phi * (b - a); f2 = f(x2);
      } else {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - inv_phi * (b - a); f1 = f(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

}  // namespace srlab
