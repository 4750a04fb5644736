#include "srlab/measures.hpp"

#include <algorithm>
#include <cmath>

namespace srlab {

Real wrap(Real t) {
  Real w = t - std::floor(t);
  // floor can round t - floor(t) up to exactly 1 for tiny negative t.
  return w >= 1.0 ? 0.0 : w;
}

Real wrap_offset(Real t, Real u) {
  Real d = wrap(t - u);
  return d >= 0.5 ? d - 1.0 : d;
}

Real wrap_distance(Real t, Real u) {
  Real d = std::abs(t - u);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

SupportSet::SupportSet(std::vector<Real> points) : points_(std::move(points)) {
  for (auto& t : points_) {
    if (!std::isfinite(t)) throw Error("support point is not finite");
    t = wrap(t);
  }
  std::sort(points_.begin(), points_.end());
  for (std::size_t i = 0; i + 1 < points_.size(); ++i)
    if (points_[i + 1] - points_[i] < kDuplicateTolerance)
      throw Error("duplicate support location");
  if (points_.size() > 1 && wrap_distance(points_.front(), points_.back()) < kDuplicateTolerance)
    throw Error("duplicate support location");
}

int SupportSet::index_of(Real t) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (wrap_distance(points_[i], t) < kDuplicateTolerance) return static_cast<int>(i);
  return -1;
}

SupportSet SupportSet::shifted(Real shift) const {
  std::vector<Real> p = points_;
  for (auto& t : p) t += shift;
  return SupportSet(std::move(p));
}

AtomicMeasure::AtomicMeasure(std::vector<Spike> spikes) {
  spikes_.reserve(spikes.size());
  for (const auto& s : spikes) {
    if (!std::isfinite(s.t) || !std::isfinite(s.amplitude.real()) ||
        !std::isfinite(s.amplitude.imag()))
      throw Error("spike has non-finite location or amplitude");
    if (s.amplitude == Complex(0.0)) continue;
    spikes_.push_back({wrap(s.t), s.amplitude});
  }
  std::sort(spikes_.begin(), spikes_.end(),
            [](const Spike& a, const Spike& b) { return a.t < b.t; });
  for (std::size_t i = 0; i + 1 < spikes_.size(); ++i)
    if (spikes_[i + 1].t - spikes_[i].t < kDuplicateTolerance)
      throw Error("duplicate spike location");
  if (spikes_.size() > 1 &&
      wrap_distance(spikes_.front().t, spikes_.back().t) < kDuplicateTolerance)
    throw Error("duplicate spike location");
}

SupportSet AtomicMeasure::support() const {
  std::vector<Real> p;
  p.reserve(spikes_.size());
  for (const auto& s : spikes_) p.push_back(s.t);
  return SupportSet(std::move(p));
}

AtomicMeasure AtomicMeasure::scaled(Complex factor) const {
  std::vector<Spike> s = spikes_;
  for (auto& sp : s) sp.amplitude *= factor;
  return AtomicMeasure(std::move(s));
}

AtomicMeasure AtomicMeasure::shifted(Real shift) const {
  std::vector<Spike> s = spikes_;
  for (auto& sp : s) sp.t += shift;
  return AtomicMeasure(std::move(s));
}

Real min_separation(const SupportSet& support) {
  const auto& p = support.points();
  if (p.size() < 2) return kInfiniteSeparation;
  // Sorted on [0,1): neighbours plus the wrap-around gap cover every pair.
  Real best = 1.0 - (p.back() - p.front());
  for (std::size_t i = 0; i + 1 < p.size(); ++i) best = std::min(best, p[i + 1] - p[i]);
  return std::min(best, 0.5);
}

Real squared_dist_to_support(Real t, const SupportSet& support) {
  if (support.empty()) throw Error("squared_dist_to_support: empty support");
  Real best = 1.0;
  for (Real s : support) best = std::min(best, wrap_distance(t, s));
  return best * best;
}

Real tv_norm(const AtomicMeasure& x) {
  Real sum = 0.0;
  for (const auto& s : x) sum += std::abs(s.amplitude);
  return sum;
}

}  // namespace srlab
