#include <doctest.h>

#include "generators.hpp"
#include "srlab/guarantees.hpp"

using namespace srlab;

namespace {

// Estimate near x: each true spike split into up to three nearby pieces, plus far junk.
AtomicMeasure perturbed(testgen::Rng& rng, const AtomicMeasure& x, int fc) {
  std::vector<Spike> out;
  for (const auto& s : x) {
    const int pieces = 1 + static_cast<int>(testgen::uniform(rng, 0, 3));
    for (int p = 0; p < pieces; ++p) {
      const Real dt = testgen::uniform(rng, -0.9, 0.9) * kNearRadius / fc;
      out.push_back({s.t + dt + 1e-9 * p, s.amplitude * testgen::uniform(rng, 0.2, 0.6)});
    }
  }
  for (int j = 0; j < 3; ++j) {
    const Real t = testgen::uniform(rng);
    if (squared_dist_to_support(t, x.support()) > std::pow(2.0 * kNearRadius / fc, 2))
      out.push_back({t, testgen::uniform(rng, 0.01, 0.1) * testgen::unit_phase(rng)});
  }
  return AtomicMeasure(out);
}

}  // namespace

TEST_SUITE("guarantees") {

TEST_CASE("identical estimate") {
  const AtomicMeasure x({{0.1, 1.0}, {0.6, Complex(0, 2)}});
  for (Real e : property_i(x, x, 20)) CHECK(e == 0.0);
  CHECK(property_ii(x, x, 20) == 0.0);
  CHECK(property_iii(x, x, 20) == 0.0);
  for (const auto& r : corollary_check(x, x, 20, 0.01, 1.0, 1.0)) {
    CHECK(r.applicable);
    CHECK(r.distance == 0.0);
    CHECK(r.within);
  }
}

TEST_CASE("split estimate aggregates to the true amplitude") {
  const int fc = 20;
  const Real lam = 1.0 / fc;
  const AtomicMeasure x({{0.5, 1.0}});
  const AtomicMeasure est({{0.5 + 0.05 * lam, 0.9}, {0.5 - 0.03 * lam, 0.1}});
  const auto e = property_i(x, est, fc);
  REQUIRE(e.size() == 1);
  CHECK(e[0] < 1e-15);
}

TEST_CASE("displacement and spurious mass examples") {
  const int fc = 20;
  const Real lam = 1.0 / fc;
  const AtomicMeasure x({{0.5, 1.0}});
  const Real d = property_ii(x, AtomicMeasure({{0.5 + 0.1 * lam, 2.0}}), fc);
  CHECK(d == doctest::Approx(0.02 * lam * lam).epsilon(1e-12));
  CHECK(property_iii(x, AtomicMeasure({{0.5, 1.0}, {0.1, 0.3}}), fc) == doctest::Approx(0.3));
  const GuaranteeReport r = guarantee_report(x, AtomicMeasure({{0.5 + 0.1 * lam, 2.0}}), fc, 0.5);
  CHECK(r.displacement_normalized == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(r.ratio_ii() == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(r.ratio_i() == doctest::Approx(2.0));
  CHECK(r.location_errors[0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("points exactly at the clustering radius count as near") {
  const int fc = 16;
  const AtomicMeasure x({{0.25, 1.0}});
  const AtomicMeasure est({{0.25 + 0.125 / fc, 1.0}});
  CHECK(assign_estimates(x, est, fc, 0.125)[0] == 0);
  CHECK(assign_estimates(x, est, fc, 0.12)[0] == -1);
}

TEST_CASE("corollary bound shrinks with delta") {
  const int fc = 20;
  const AtomicMeasure x({{0.3, 1.0}});
  const AtomicMeasure est({{0.3 + 0.01 / fc, 1.0}});
  Real previous = kInfiniteSeparation;
  for (Real delta : {1e-1, 1e-2, 1e-4, 1e-8}) {
    const auto r = corollary_check(x, est, fc, delta, 1.0, 1.0);
    REQUIRE(r.size() == 1);
    CHECK(r[0].applicable);
    CHECK(r[0].bound < previous);
    CHECK(r[0].bound == doctest::Approx(std::sqrt(delta / (1.0 - delta)) / fc));
    CHECK(r[0].within == (r[0].distance <= r[0].bound));
    previous = r[0].bound;
  }
  CHECK(corollary_check(x, est, fc, 1e-8, 1.0, 1.0)[0].within == false);
  CHECK(corollary_check(x, est, fc, 2.0, 1.0, 1.0)[0].applicable == false);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(property_i(AtomicMeasure(), AtomicMeasure({{0.1, 1.0}}), 10), Error);
  CHECK_THROWS_AS(corollary_check(AtomicMeasure({{0.1, 1.0}}), AtomicMeasure(), 10, 0.1, 0.0, 1.0), Error);
  CHECK(property_iii(AtomicMeasure({{0.1, 1.0}}), AtomicMeasure(), 10) == 0.0);
}

TEST_CASE("property: near and far sets partition the estimate") {
  testgen::Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int fc = 20;
    const AtomicMeasure x = testgen::random_measure(rng, 4, 2.0 / fc);
    const AtomicMeasure est = perturbed(rng, x, fc);
    const auto owners = assign_estimates(x, est, fc);
    REQUIRE(owners.size() == est.size());
    Real near = 0.0, far = 0.0;
    for (std::size_t l = 0; l < est.size(); ++l) {
      const bool is_near = squared_dist_to_support(est[l].t, x.support()) <=
                           std::pow(kNearRadius / fc, 2);
      CHECK((owners[l] >= 0) == is_near);
      (owners[l] >= 0 ? near : far) += std::abs(est[l].amplitude);
    }
    CHECK(near + far == doctest::Approx(tv_norm(est)).epsilon(1e-14));
    CHECK(property_iii(x, est, fc) == doctest::Approx(far).epsilon(1e-14));
    Real owned = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      Complex sum = 0.0;
      for (std::size_t l = 0; l < est.size(); ++l)
        if (owners[l] == static_cast<int>(j)) sum += est[l].amplitude;
      owned += std::abs(sum);
      CHECK(property_i(x, est, fc)[j] == doctest::Approx(std::abs(x[j].amplitude - sum)).epsilon(1e-14));
    }
    CHECK(owned <= near + 1e-14);
  }
}

TEST_CASE("property: shift equivariance and scaling") {
  testgen::Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const int fc = 20;
    const AtomicMeasure x = testgen::random_measure(rng, 3, 2.0 / fc);
    const AtomicMeasure est = perturbed(rng, x, fc);
    const Real tau = testgen::uniform(rng);
    const AtomicMeasure xs = x.shifted(tau), es = est.shifted(tau);
    // Shifting re-sorts the spikes, so compare the per-spike errors as multisets.
    auto pi = property_i(x, est, fc), pis = property_i(xs, es, fc);
    REQUIRE(pi.size() == pis.size());
    std::vector<Real> a = pi, b = pis;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) < 1e-12);
    CHECK(std::abs(property_ii(x, est, fc) - property_ii(xs, es, fc)) < 1e-12);
    CHECK(std::abs(property_iii(x, est, fc) - property_iii(xs, es, fc)) < 1e-12);

    const Real s = testgen::uniform(rng, 0.1, 10.0);
    const AtomicMeasure xm = x.scaled(s), em = est.scaled(s);
    const auto pim = property_i(xm, em, fc);
    for (std::size_t j = 0; j < pi.size(); ++j) CHECK(pim[j] == doctest::Approx(s * pi[j]).epsilon(1e-12));
    CHECK(property_ii(xm, em, fc) == doctest::Approx(s * property_ii(x, est, fc)).epsilon(1e-12));
    CHECK(property_iii(xm, em, fc) == doctest::Approx(s * property_iii(x, est, fc)).epsilon(1e-12));
  }
}

TEST_CASE("report entries are nonnegative") {
  testgen::Rng rng(63);
  for (int trial = 0; trial < 50; ++trial) {
    const AtomicMeasure x = testgen::random_measure(rng, 3, 0.1);
    const GuaranteeReport r = guarantee_report(x, perturbed(rng, x, 20), 20, 0.01);
    for (Real e : r.amplitude_errors) CHECK(e >= 0.0);
    for (Real e : r.location_errors) CHECK(e >= 0.0);
    CHECK(r.displacement >= 0.0);
    CHECK(r.spurious_mass >= 0.0);
    CHECK(r.max_amplitude_error() >= 0.0);
  }
  CHECK(guarantee_report(AtomicMeasure({{0.1, 1.0}}), AtomicMeasure(), 20, 0.0).ratio_i() == 0.0);
}

}  // TEST_SUITE
