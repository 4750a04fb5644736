#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace srlab {

using Real = double;
using Complex = std::complex<double>;

/// Thrown for violated preconditions anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Locations closer than this (on the circle) are the same point.
inline constexpr Real kDuplicateTolerance = 1e-12;

/// Value returned by min_separation for sets with fewer than two points.
inline constexpr Real kInfiniteSeparation = std::numeric_limits<Real>::infinity();

/// Maps any real to its representative in [0, 1).
Real wrap(Real t);

/// Signed offset t - u reduced to [-1/2, 1/2).
Real wrap_offset(Real t, Real u);

/// Circle distance min(|t-u|, 1-|t-u|), in [0, 1/2].
Real wrap_distance(Real t, Real u);

struct Spike {
  Real t;
  Complex amplitude;
};

/// Sorted, duplicate-free set of points on the unit circle.
class SupportSet {
 public:
  SupportSet() = default;
  /// Wraps, sorts and rejects duplicates (closer than kDuplicateTolerance).
  explicit SupportSet(std::vector<Real> points);

  const std::vector<Real>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Real operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  /// Index of the point within kDuplicateTolerance of t, or -1.
  int index_of(Real t) const;

  SupportSet shifted(Real shift) const;

 private:
  std::vector<Real> points_;
};

/// Finite sum of Dirac masses on the circle, sorted by location.
///
/// Zero amplitudes are dropped on construction; coincident locations are an
/// error.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Spike> spikes);

  const std::vector<Spike>& spikes() const { return spikes_; }
  std::size_t size() const { return spikes_.size(); }
  bool empty() const { return spikes_.empty(); }
  const Spike& operator[](std::size_t i) const { return spikes_[i]; }
  auto begin() const { return spikes_.begin(); }
  auto end() const { return spikes_.end(); }

  SupportSet support() const;

  AtomicMeasure scaled(Complex factor) const;
  AtomicMeasure shifted(Real shift) const;

 private:
  std::vector<Spike> spikes_;
};

/// Smallest circle distance between distinct points, or kInfiniteSeparation.
Real min_separation(const SupportSet& support);

/// min over support points of wrap_distance(t, t_i)^2. Throws on empty support.
Real squared_dist_to_support(Real t, const SupportSet& support);

/// Total-variation norm of an atomic measure: sum of |a_j|.
Real tv_norm(const AtomicMeasure& x);

}  // namespace srlab
