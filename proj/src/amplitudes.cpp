#include <algorithm>
#include <cmath>
#include <numbers>

#include "srlab/solver.hpp"

namespace srlab {

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd fourier_map(int fc, const std::vector<Real>& t) {
  Eigen::MatrixXcd a(2 * fc + 1, static_cast<Eigen::Index>(t.size()));
  for (std::size_t l = 0; l < t.size(); ++l)
    for (int k = -fc; k <= fc; ++k) a(k + fc, l) = std::polar(1.0, -kTwoPi * k * t[l]);
  return a;
}

struct LsFit {
  Eigen::VectorXcd amplitudes;
  bool full_rank;
};

LsFit least_squares(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  cod.setThreshold(1e-12);
  return {cod.solve(y), cod.rank() == a.cols()};
}

/// Merges points closer than `radius` into their midpoint.
std::vector<Real> merge_close(const std::vector<Real>& t, Real radius) {
  std::vector<Real> out;
  for (Real s : t) {
    if (!out.empty() && wrap_distance(out.back(), s) <= radius)
      out.back() = wrap(out.back() + wrap_offset(s, out.back()) / 2.0);
    else
      out.push_back(s);
  }
  if (out.size() > 1 && wrap_distance(out.front(), out.back()) <= radius) {
    out.front() = wrap(out.back() + wrap_offset(out.front(), out.back()) / 2.0);
    out.pop_back();
  }
  return out;
}

/// Levenberg-Marquardt on (locations, amplitudes) for min ||F x - y||,
/// stopping as soon as the residual drops to `target`.
void refine_locations(std::vector<Real>& t, Eigen::VectorXcd& amp, const Eigen::VectorXcd& y, int fc,
                      Real target) {
  const auto s = static_cast<Eigen::Index>(t.size());
  const Eigen::Index n = y.size();
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = static_cast<Real>(i - fc);
  auto residual = [&](const std::vector<Real>& tt, const Eigen::VectorXcd& aa) {
    return Eigen::VectorXcd(fourier_map(fc, tt) * aa - y);
  };
  Eigen::VectorXcd r = residual(t, amp);
  Real cost = r.norm();
  Real mu = 1e-3;
  for (int it = 0; it < 200 && cost > target; ++it) {
    const Eigen::MatrixXcd a = fourier_map(fc, t);
    // Columns: d/dt_l, d/dRe a_l, d/dIm a_l, stacked as a real 2n x 3s system.
    Eigen::MatrixXd j(2 * n, 3 * s);
    for (Eigen::Index l = 0; l < s; ++l) {
      const Eigen::VectorXcd dt = (a.col(l).array() * (Complex(0.0, -kTwoPi) * k.array()) * amp(l)).matrix();
      j.col(3 * l) << dt.real(), dt.imag();
      j.col(3 * l + 1) << a.col(l).real(), a.col(l).imag();
      j.col(3 * l + 2) << -a.col(l).imag(), a.col(l).real();
    }
    Eigen::VectorXd rr(2 * n);
    rr << r.real(), r.imag();
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * rr;
    bool improved = false;
    for (int attempt = 0; attempt < 20; ++attempt) {
      Eigen::MatrixXd m = jtj;
      m.diagonal() += mu * (jtj.diagonal().array() + 1e-30).matrix();
      const Eigen::VectorXd step = -m.ldlt().solve(g);
      std::vector<Real> t_new = t;
      Eigen::VectorXcd a_new = amp;
      for (Eigen::Index l = 0; l < s; ++l) {
        t_new[l] = t[l] + step(3 * l);
        a_new(l) += Complex(step(3 * l + 1), step(3 * l + 2));
      }
      const Eigen::VectorXcd r_new = residual(t_new, a_new);
      if (r_new.norm() < cost) {
        t = t_new;
        amp = a_new;
        r = r_new;
        cost = r.norm();
        mu = std::max(mu / 10.0, 1e-12);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  for (auto& v : t) v = wrap(v);
}

}  // namespace

AmplitudeFit fit_amplitudes_detailed(const SpectrumVector& y, const SupportSet& support, Real delta,
                                     const SolverOptions& opts) {
  AmplitudeFit out;
  const int fc = y.fc;
  const Eigen::Index n = y.size();
  if (static_cast<Eigen::Index>(support.size()) > n)
    throw Error("fit_amplitudes: more support points than measurements");
  if (support.empty()) {
    out.residual = y.coeffs.norm();
    out.feasible = out.residual <= delta + opts.feasibility_tolerance;
    return out;
  }
  const Real radius = opts.cluster_radius / std::max(1, fc);
  std::vector<Real> t = support.points();

  LsFit fit = least_squares(fourier_map(fc, t), y.coeffs);
  if (!fit.full_rank) {
    t = merge_close(t, radius);
    out.merged = true;
    fit = least_squares(fourier_map(fc, t), y.coeffs);
    if (!fit.full_rank) throw Error("fit_amplitudes: rank-deficient design after merging");
  }

  // Prune negligible spikes and refit once.
  const Real prune = opts.prune_fraction * y.coeffs.norm();
  std::vector<Real> kept;
  for (std::size_t l = 0; l < t.size(); ++l)
    if (std::abs(fit.amplitudes(l)) >= prune) kept.push_back(t[l]);
  if (kept.size() != t.size()) {
    t = kept;
    fit = t.empty() ? LsFit{Eigen::VectorXcd(), true} : least_squares(fourier_map(fc, t), y.coeffs);
  }

  Eigen::VectorXcd amp = fit.amplitudes;
  Real residual = t.empty() ? y.coeffs.norm() : (fourier_map(fc, t) * amp - y.coeffs).norm();
  if (residual > delta + opts.feasibility_tolerance && !t.empty()) {
    // Aim slightly inside the ball so the reported residual clears the tolerance.
    refine_locations(t, amp, y.coeffs, fc, delta + 0.5 * opts.feasibility_tolerance);
    out.refined = true;
  }

  std::vector<Spike> spikes;
  for (std::size_t l = 0; l < t.size(); ++l) spikes.push_back({t[l], amp(l)});
  try {
    out.estimate = AtomicMeasure(std::move(spikes));
  } catch (const Error&) {
    // Refinement collapsed two locations onto each other; fall back to the merge.
    std::vector<Spike> sorted;
    for (std::size_t l = 0; l < t.size(); ++l) sorted.push_back({t[l], amp(l)});
    std::sort(sorted.begin(), sorted.end(), [](const Spike& a, const Spike& b) { return a.t < b.t; });
    std::vector<Spike> merged;
    for (const auto& s : sorted) {
      if (!merged.empty() && wrap_distance(merged.back().t, s.t) < kDuplicateTolerance)
        merged.back().amplitude += s.amplitude;
      else
        merged.push_back(s);
    }
    if (merged.size() > 1 && wrap_distance(merged.front().t, merged.back().t) < kDuplicateTolerance) {
      merged.front().amplitude += merged.back().amplitude;
      merged.pop_back();
    }
    out.estimate = AtomicMeasure(std::move(merged));
  }
  out.residual = data_residual(out.estimate, y);
  out.feasible = out.residual <= delta + opts.feasibility_tolerance;
  return out;
}

AtomicMeasure fit_amplitudes(const SpectrumVector& y, const SupportSet& support, Real delta,
                             const SolverOptions& opts) {
  return fit_amplitudes_detailed(y, support, delta, opts).estimate;
}

}  // namespace srlab
