#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/Polynomials>

#include "srlab/solver.hpp"

namespace srlab {

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;

/// Coefficients (ascending) of z^{2fc} (level - |p(z)|^2) on the unit circle.
Eigen::VectorXcd unit_gap_polynomial(const SpectrumVector& c, Real level) {
  const int fc = c.fc;
  const int deg = 4 * fc;
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(deg + 1);
  // r_m = sum_l c_{l+m} conj(c_l), |p|^2 = sum_m r_m z^m.
  for (int m = -2 * fc; m <= 2 * fc; ++m) {
    Complex r = 0.0;
    for (int l = std::max(-fc, -fc - m); l <= std::min(fc, fc - m); ++l)
      r += c.at(l + m) * std::conj(c.at(l));
    a(m + 2 * fc) = -r;
  }
  a(2 * fc) += level;
  return a;
}

/// Newton iteration on d/dt |p|^2 = 0, staying within `radius` of t0.
Real polish_peak(const SpectrumVector& c, Real t0, Real radius) {
  Real t = t0;
  for (int it = 0; it < 40; ++it) {
    const Complex p = eval_trig_poly(c, t, 0);
    const Complex p1 = eval_trig_poly(c, t, 1);
    const Complex p2 = eval_trig_poly(c, t, 2);
    const Real g = 2.0 * (p1 * std::conj(p)).real();
    const Real h = 2.0 * ((p2 * std::conj(p)).real() + std::norm(p1));
    if (!(h < 0.0)) break;
    Real step = -g / h;
    step = std::clamp(step, -radius, radius);
    t += step;
    if (wrap_distance(t, t0) > radius) return t0;
    if (std::abs(step) < 1e-15) break;
  }
  return wrap(t);
}

}  // namespace

SupportExtraction extract_support_detailed(const DualSolution& dual, const SolverOptions& opts) {
  SupportExtraction out;
  const SpectrumVector& c = dual.c;
  const int fc = c.fc;
  if (c.coeffs.norm() == 0.0) return out;
  if (fc == 0) {
    out.degenerate = std::abs(1.0 - std::norm(c.coeffs(0))) < opts.support_threshold;
    return out;
  }
  const Real lambda = 1.0 / fc;
  const Real radius = opts.cluster_radius * lambda;

  // |p| ~ 1 everywhere: the dual does not pin down a discrete support.
  const Eigen::VectorXcd grid = eval_trig_poly_grid(c, 16 * fc);
  const Real max_gap = (1.0 - grid.cwiseAbs2().array()).abs().maxCoeff();
  if (max_gap < opts.support_threshold) {
    out.degenerate = true;
    return out;
  }

  // Level set slightly below 1: a maximum of |p| that reaches 1 up to the
  // acceptance threshold crosses it transversally, so its roots sit on the
  // circle instead of splitting off it as a perturbed double root would.
  Eigen::VectorXcd a = unit_gap_polynomial(c, 1.0 - 0.5 * opts.support_threshold);
  const Real amax = a.cwiseAbs().maxCoeff();
  Eigen::Index lo = 0, hi = a.size() - 1;
  while (hi > 0 && std::abs(a(hi)) <= 1e-15 * amax) --hi;
  while (lo < hi && std::abs(a(lo)) <= 1e-15 * amax) ++lo;
  std::vector<Real> candidates;
  if (hi > lo) {
    Eigen::PolynomialSolver<Complex, Eigen::Dynamic> roots;
    roots.compute(Eigen::VectorXcd(a.segment(lo, hi - lo + 1)));
    for (Eigen::Index i = 0; i < roots.roots().size(); ++i) {
      const Complex z = roots.roots()(i);
      if (std::abs(std::abs(z) - 1.0) < opts.root_modulus_window)
        candidates.push_back(wrap(std::arg(z) / kTwoPi));
    }
  }
  out.unit_roots = static_cast<int>(candidates.size());
  if (out.unit_roots >= 4 * fc) out.degenerate = true;
  if (candidates.empty()) return out;

  // Chain-cluster on the circle.
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::vector<Real>> clusters{{candidates[0]}};
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i] - clusters.back().back() <= radius)
      clusters.back().push_back(candidates[i]);
    else
      clusters.push_back({candidates[i]});
  }
  if (clusters.size() > 1 && wrap_distance(clusters.back().back(), clusters.front().front()) <= radius) {
    for (Real t : clusters.front()) clusters.back().push_back(t + 1.0);
    clusters.erase(clusters.begin());
  }

  std::vector<Real> points;
  for (const auto& cl : clusters) {
    Real mean = 0.0;
    for (Real t : cl) mean += t;
    mean /= static_cast<Real>(cl.size());
    const Real t = polish_peak(c, wrap(mean), radius);
    if (std::abs(1.0 - std::norm(eval_trig_poly(c, t))) >= opts.support_threshold) continue;
    bool duplicate = false;
    for (Real s : points) duplicate |= wrap_distance(s, t) <= radius;
    if (!duplicate) points.push_back(t);
  }
  out.support = SupportSet(std::move(points));
  return out;
}

SupportSet extract_support(const DualSolution& dual, const SolverOptions& opts) {
  return extract_support_detailed(dual, opts).support;
}

}  // namespace srlab
