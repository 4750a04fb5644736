#include <doctest.h>

#include "generators.hpp"
#include "srlab/certificate.hpp"

using namespace srlab;

namespace {

SupportSet random_support(testgen::Rng& rng, int fc, int k, bool exact = false) {
  return SupportSet(testgen::separated_points(rng, k, 2.0 / fc, exact));
}

Eigen::VectorXcd random_signs(testgen::Rng& rng, std::size_t n) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = testgen::unit_phase(rng);
  return v;
}

}  // namespace

TEST_SUITE("certificate") {

TEST_CASE("singleton system is the identity") {
  const InterpolationSystem sys = build_system(SupportSet({0.3}), 20);
  CHECK(sys.D0(0, 0) == doctest::Approx(1.0));
  CHECK(sys.D1(0, 0) == 0.0);
  CHECK(sys.schur(0, 0) == doctest::Approx(1.0));
  CHECK(sys.identity_minus_schur < 1e-15);
  CHECK(sys.schur_inverse == doctest::Approx(1.0));
  CHECK(sys.identity_minus_schur_inverse < 1e-15);
}

TEST_CASE("two spikes at 2 lambda, fc = 128") {
  const InterpolationSystem sys = build_system(SupportSet({0.0, 2.0 / 128}), 128);
  CHECK(sys.identity_minus_schur <= bounds::kIdentityMinusSchur);
}

TEST_CASE("property: matrix structure on random supports") {
  testgen::Rng rng(41);
  for (int fc : {20, 64, 128}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int k = 1 + static_cast<int>(testgen::uniform(rng, 0, fc / 2.0 - 1));
      const InterpolationSystem sys = build_system(random_support(rng, fc, k, trial % 2), fc);
      const Real s0 = 1.0, s1 = fc, s2 = Real(fc) * fc;
      CHECK((sys.D0 - sys.D0.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * s0);
      CHECK((sys.D1 + sys.D1.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * s1);
      CHECK((sys.D2 - sys.D2.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * s2);
      CHECK((sys.D0.diagonal().array() - 1.0).abs().maxCoeff() < 1e-15);
      CHECK(sys.D1.diagonal().cwiseAbs().maxCoeff() < 1e-12 * s1);
      const Eigen::MatrixXd s = sys.D0 - sys.D1 * sys.D2.inverse() * sys.D1;
      CHECK((s - sys.schur).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("property: Schur diagnostics under minimum separation") {
  testgen::Rng rng(42);
  for (int fc : {20, 64, 128}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int k = 1 + static_cast<int>(testgen::uniform(rng, 0, fc / 2.0 - 1));
      const InterpolationSystem sys = build_system(random_support(rng, fc, k, true), fc);
      CHECK(sys.identity_minus_schur <= bounds::kIdentityMinusSchur);
      CHECK(sys.schur_inverse <= bounds::kSchurInverse);
      CHECK(sys.identity_minus_schur_inverse <= bounds::kIdentityMinusSchurInverse);
    }
  }
}

TEST_CASE("build_system errors") {
  CHECK_THROWS_AS(build_system(SupportSet({0.0, 0.05}), 20), Error);
  CHECK_THROWS_AS(build_system(SupportSet({0.0}), 9), Error);
  CHECK_THROWS_AS(build_system(SupportSet({0.0}), 21), Error);
  CHECK_THROWS_AS(build_system(SupportSet(), 20), Error);
}

TEST_CASE("sign certificate on a singleton is the kernel") {
  const InterpolationSystem sys = build_system(SupportSet({0.0}), 20);
  Eigen::VectorXcd v(1);
  v << 1.0;
  const Certificate q = build_sign_certificate(sys, v);
  CHECK(std::abs(q(0.0) - 1.0) < 1e-14);
  for (Real t : {0.01, 0.2, 0.45}) CHECK(std::abs(q(t) - Kernel(20)(t)) < 1e-14);
  const CertificateReport r = verify_sign_certificate(q);
  CHECK(r.measured_ca > 0.0);
  CHECK(r.measured_cb > 0.0);
}

TEST_CASE("property: sign certificates interpolate and stay below one") {
  testgen::Rng rng(43);
  for (int fc : {20, 64}) {
    for (int trial = 0; trial < 5; ++trial) {
      const int k = 2 + static_cast<int>(testgen::uniform(rng, 0, fc / 4.0));
      const InterpolationSystem sys = build_system(random_support(rng, fc, k), fc);
      const Eigen::VectorXcd v = random_signs(rng, sys.support.size());
      const Certificate q = build_sign_certificate(sys, v);
      Real res = 0.0;
      for (std::size_t j = 0; j < sys.support.size(); ++j) {
        res = std::max(res, std::abs(eval_trig_poly(q.fourier, sys.support[j]) - v(j)));
        res = std::max(res, std::abs(eval_trig_poly(q.fourier, sys.support[j], 1)) / fc);
      }
      CHECK(res < 1e-9);
      const CertificateReport r = verify_sign_certificate(q);
      CHECK(r.check("interpolation residual").pass);
      CHECK(r.global_sup < 1.0);
      CHECK(r.all_pass());
    }
  }
}

TEST_CASE("minimum-gap pair at fc = 64") {
  testgen::Rng rng(44);
  const InterpolationSystem sys = build_system(SupportSet({0.2, 0.2 + 2.0 / 64}), 64);
  const Certificate q = build_sign_certificate(sys, random_signs(rng, 2));
  const CertificateReport r = verify_sign_certificate(q);
  CHECK(r.measured_ca > 0.0);
  CHECK(kNearRadius * kNearRadius * r.measured_cb <= r.measured_ca + 1e-9);
}

TEST_CASE("sign certificate errors") {
  const InterpolationSystem sys = build_system(SupportSet({0.0, 0.5}), 20);
  Eigen::VectorXcd v(2);
  v << 1.0, 0.5;
  CHECK_THROWS_AS(build_sign_certificate(sys, v), Error);
  CHECK_THROWS_AS(build_sign_certificate(sys, Eigen::VectorXcd::Ones(3)), Error);
}

TEST_CASE("localizer of a singleton is the shifted kernel") {
  for (int fc : {10, 20, 64}) {
    const InterpolationSystem sys = build_system(SupportSet({0.5}), fc);
    const Certificate q = build_localizer(sys, 0.5);
    CHECK(std::abs(q.alpha(0) - 1.0) < 1e-14);
    CHECK(std::abs(q.beta(0)) < 1e-14);
    for (Real t : {0.0, 0.3, 0.51, 0.77}) CHECK(std::abs(q(t) - Kernel(fc)(t - 0.5)) < 1e-14);
    const CertificateReport r = verify_localizer(q);
    CHECK(r.check("|q| < 1 off t_j").pass);
    CHECK(r.check("Re q >= 1 - 4.07 (t-t_j)^2 fc^2").measured < bounds::kNearLower);
  }
}

TEST_CASE("localizer at T = {0, 2 lambda, 5 lambda}, fc = 64") {
  const int fc = 64;
  const InterpolationSystem sys = build_system(SupportSet({0.0, 2.0 / fc, 5.0 / fc}), fc);
  const Certificate q = build_localizer(sys, 0.0);
  const Real r0 = std::abs(q(0.0) - 1.0), r1 = std::abs(q(2.0 / fc)), r2 = std::abs(q(5.0 / fc));
  CHECK(r0 < 1e-9);
  CHECK(r1 < 1e-9);
  CHECK(r2 < 1e-9);
  for (Real t : sys.support) CHECK(std::abs(q(t, 1)) < 1e-9 * fc);
  Eigen::VectorXcd dev = q.alpha;
  dev(0) -= 1.0;
  CHECK(dev.cwiseAbs().maxCoeff() <= bounds::kAlphaDeviation);
  CHECK(q.beta.cwiseAbs().maxCoeff() <= bounds::kBeta / fc);
  CHECK(q.route_discrepancy < 1e-9);
}

TEST_CASE("build_localizer rejects a point outside T") {
  const InterpolationSystem sys = build_system(SupportSet({0.0, 0.5}), 20);
  CHECK_THROWS_AS(build_localizer(sys, 0.25), Error);
  CHECK_THROWS_AS(verify_localizer(build_sign_certificate(sys, Eigen::VectorXcd::Ones(2))), Error);
}

TEST_CASE("singleton localizer Fourier coefficients are the kernel's") {
  const Kernel k(20);
  const Certificate q = build_localizer(build_system(SupportSet({0.0}), 20), 0.0);
  REQUIRE(q.fourier.fc == 20);
  CHECK((q.fourier.coeffs - k.fourier().cast<Complex>()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(q.fourier.coeffs.imag().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("property: Fourier form matches the kernel sum and has unit-bounded norm") {
  testgen::Rng rng(45);
  for (int fc : {20, 64, 128}) {
    for (int trial = 0; trial < 4; ++trial) {
      const int k = 1 + static_cast<int>(testgen::uniform(rng, 0, fc / 3.0));
      const InterpolationSystem sys = build_system(random_support(rng, fc, k, true), fc);
      const auto j = static_cast<std::size_t>(testgen::uniform(rng, 0, static_cast<Real>(sys.support.size())));
      const Certificate q = build_localizer(sys, sys.support[j]);
      const int n = 16 * fc;
      const Eigen::VectorXcd grid = eval_trig_poly_grid(q.fourier, n);
      Real err = 0.0, scale = 0.0;
      for (int m = 0; m < n; ++m) {
        const Complex ks = q(static_cast<Real>(m) / n);
        err = std::max(err, std::abs(grid(m) - ks));
        scale = std::max(scale, std::abs(ks));
      }
      CHECK(err < 1e-10 * scale);
      CHECK(q.fourier.coeffs.norm() <= 1.0 + 1e-9);
      CHECK(q.route_discrepancy < 1e-9);
    }
  }
}

TEST_CASE("property: localizers interpolate and stay below one off the anchor") {
  testgen::Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const int fc = 20;
    const int k = 2 + static_cast<int>(testgen::uniform(rng, 0, 8));
    const InterpolationSystem sys = build_system(random_support(rng, fc, k, trial % 2), fc);
    for (std::size_t j = 0; j < sys.support.size(); ++j) {
      const CertificateReport r = verify_localizer(build_localizer(sys, sys.support[j]));
      CHECK(r.check("interpolation residual").pass);
      CHECK(r.check("Schur route agreement").pass);
      CHECK(r.check("||alpha - e_j||_inf").pass);
      CHECK(r.check("||beta||_inf / lambda").pass);
      CHECK(r.check("||q||_L2").pass);
      CHECK(r.check("Re q >= 1 - 4.07 (t-t_j)^2 fc^2").pass);
      CHECK(r.check("|q| <= 16.64 (t-t_l)^2 fc^2").pass);
      CHECK(r.global_sup < 1.0);
    }
  }
}

TEST_CASE("property: tail sums") {
  testgen::Rng rng(47);
  for (int fc : {20, 64, 128}) {
    const Kernel kernel(fc);
    for (int trial = 0; trial < 5; ++trial) {
      const int k = 1 + static_cast<int>(testgen::uniform(rng, 0, fc / 2.0 - 1));
      const SupportSet t = random_support(rng, fc, k, true);
      for (int i = 0; i < 200; ++i) {
        const Real s = testgen::uniform(rng);
        CHECK(tail_sum_excluding_two(kernel, t, s, 0) <= bounds::kTailK0 + 1e-9);
        CHECK(tail_sum_excluding_two(kernel, t, s, 1) <= bounds::kTailK1 * fc + 1e-9);
        const auto j = static_cast<int>(testgen::uniform(rng, 0, static_cast<Real>(t.size())));
        const Real near = t[j] + testgen::uniform(rng, -kNearRadius, kNearRadius) / fc;
        CHECK(tail_sum_excluding(kernel, t, near, j, 2) <= bounds::kTailK2 * fc * fc + 1e-9);
        CHECK(tail_sum_excluding(kernel, t, near, j, 3) <= bounds::kTailK3 * fc * fc * fc + 1e-9);
      }
    }
  }
}

TEST_CASE("property: certificate pairing is bounded by the data misfit") {
  // |int q d(x - x')| <= ||b||_2 ||F(x - x')||_2 by Parseval and Cauchy-Schwarz.
  testgen::Rng rng(48);
  const int fc = 20;
  for (int trial = 0; trial < 20; ++trial) {
    const InterpolationSystem sys = build_system(random_support(rng, fc, 4), fc);
    const Certificate q = build_localizer(sys, sys.support[0]);
    const AtomicMeasure x = testgen::random_measure(rng, 3, 0.1);
    const AtomicMeasure xp = testgen::random_measure(rng, 5, 0.05);
    Complex pairing = 0.0;
    for (const auto& s : x) pairing += q(s.t) * s.amplitude;
    for (const auto& s : xp) pairing -= q(s.t) * s.amplitude;
    const Real misfit = (lowpass_sample(x, fc).coeffs - lowpass_sample(xp, fc).coeffs).norm();
    CHECK(std::abs(pairing) <= q.fourier.coeffs.norm() * misfit * (1.0 + 1e-12));
    CHECK(std::abs(pairing) <= misfit * (1.0 + 1e-9));
  }
}

TEST_CASE("report lookup") {
  const CertificateReport r = verify_localizer(build_localizer(build_system(SupportSet({0.1}), 20), 0.1));
  CHECK_THROWS_AS(r.check("no such check"), Error);
  CHECK(to_string(CertificateKind::Localizer) != to_string(CertificateKind::Sign));
}

}  // TEST_SUITE
