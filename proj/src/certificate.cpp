#include "srlab/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace srlab {

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;
constexpr Real kInterpolationTolerance = 1e-9;

Eigen::VectorXd refine(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, const Eigen::MatrixXd& a,
                       const Eigen::VectorXd& b) {
  Eigen::VectorXd x = lu.solve(b);
  x += lu.solve(b - a * x);
  return x;
}

Real default_step(int fc, Real grid_step) {
  const Real lambda = 1.0 / fc;
  if (grid_step <= 0.0) return lambda / 200.0;
  if (grid_step > lambda / 200.0 * (1.0 + 1e-12))
    throw Error("grid_step must be at most lambda_c / 200");
  return grid_step;
}

/// Offsets m*step for |m*step| <= edge, plus the exact endpoints.
std::vector<Real> near_offsets(Real edge, Real step) {
  const int m = static_cast<int>(std::floor(edge / step));
  std::vector<Real> d;
  d.reserve(2 * m + 3);
  d.push_back(-edge);
  for (int i = -m; i <= m; ++i) d.push_back(i * step);
  d.push_back(edge);
  return d;
}

struct FarScan {
  Real sup = 0.0;
  bool any = false;
};

/// Sup of |q| over points farther than `edge` from every support point: FFT
/// grid, then golden-section refinement of the largest local maxima.
FarScan scan_far(const Certificate& cert, Real edge, Real step) {
  const int n = static_cast<int>(std::ceil(1.0 / step));
  const Eigen::VectorXcd values = eval_trig_poly_grid(cert.fourier, n);
  const auto& pts = cert.support.points();
  auto is_far = [&](Real t) {
    for (Real s : pts)
      if (wrap_distance(t, s) <= edge) return false;
    return true;
  };
  std::vector<std::pair<Real, int>> peaks;
  FarScan out;
  for (int i = 0; i < n; ++i) {
    const Real t = static_cast<Real>(i) / n;
    if (!is_far(t)) continue;
    const Real v = std::abs(values(i));
    out.any = true;
    out.sup = std::max(out.sup, v);
    const Real prev = std::abs(values((i + n - 1) % n)), next = std::abs(values((i + 1) % n));
    if (v >= prev && v >= next) peaks.emplace_back(v, i);
  }
  std::sort(peaks.begin(), peaks.end(), std::greater<>());
  const std::size_t refine_count = std::min<std::size_t>(peaks.size(), 8);
  for (std::size_t p = 0; p < refine_count; ++p) {
    const Real center = static_cast<Real>(peaks[p].second) / n;
    auto f = [&](Real t) { return is_far(t) ? std::abs(cert(t)) : 0.0; };
    out.sup = std::max(out.sup, refined_max(f, center - 1.0 / n, center + 1.0 / n, 1.0 / n));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd InterpolationSystem::block() const {
  const auto n = D0.rows();
  Eigen::MatrixXd a(2 * n, 2 * n);
  a << D0, D1, D1, D2;
  return a;
}

Eigen::VectorXcd InterpolationSystem::solve(const Eigen::VectorXcd& rhs) const {
  const Eigen::MatrixXd a = block();
  Eigen::VectorXcd x(rhs.size());
  x.real() = refine(block_lu, a, rhs.real());
  x.imag() = refine(block_lu, a, rhs.imag());
  return x;
}

InterpolationSystem build_system(const SupportSet& support, int fc) {
  const Kernel kernel(fc);
  if (support.empty()) throw Error("build_system: empty support");
  const Real sep = min_separation(support);
  if (sep < 2.0 / fc * (1.0 - 1e-12))
    throw Error("build_system: minimum separation below 2/fc");

  InterpolationSystem sys;
  sys.support = support;
  sys.fc = fc;
  const auto n = static_cast<Eigen::Index>(support.size());
  sys.D0.resize(n, n);
  sys.D1.resize(n, n);
  sys.D2.resize(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto d = kernel.derivatives(support[l] - support[k]);
      sys.D0(l, k) = d[0];
      sys.D1(l, k) = d[1];
      sys.D2(l, k) = d[2];
    }
  }
  sys.d2_lu.compute(sys.D2);
  sys.schur = sys.D0 - sys.D1 * sys.d2_lu.solve(sys.D1);
  sys.schur_lu.compute(sys.schur);
  sys.block_lu.compute(sys.block());

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd schur_inv = sys.schur_lu.inverse();
  if (!schur_inv.allFinite() || std::abs(sys.block_lu.determinant()) == 0.0)
    throw Error("build_system: interpolation system is singular");
  sys.identity_minus_schur = inf_norm(id - sys.schur);
  sys.schur_inverse = inf_norm(schur_inv);
  sys.identity_minus_schur_inverse = inf_norm(id - schur_inv);
  return sys;
}

Complex Certificate::operator()(Real t, int order) const {
  if (order < 0 || order > 2) throw Error("certificate derivative order must be in 0..2");
  Complex acc = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const auto d = kernel_derivatives<Real>(fc, t - support[k]);
    acc += alpha(k) * d[order] + beta(k) * d[order + 1];
  }
  return acc;
}

namespace {

Certificate assemble(const InterpolationSystem& sys, CertificateKind kind, int anchor,
                     const Eigen::VectorXcd& targets) {
  const auto n = static_cast<Eigen::Index>(sys.support.size());
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * n);
  rhs.head(n) = targets;
  const Eigen::VectorXcd sol = sys.solve(rhs);

  // Schur route: alpha = S^{-1} v, beta = -D2^{-1} D1 alpha.
  Eigen::VectorXcd alpha_s(n), beta_s(n);
  for (int part = 0; part < 2; ++part) {
    const Eigen::VectorXd v = part == 0 ? Eigen::VectorXd(targets.real()) : Eigen::VectorXd(targets.imag());
    const Eigen::VectorXd a = refine(sys.schur_lu, sys.schur, v);
    const Eigen::VectorXd b = -refine(sys.d2_lu, sys.D2, sys.D1 * a);
    if (part == 0) {
      alpha_s.real() = a;
      beta_s.real() = b;
    } else {
      alpha_s.imag() = a;
      beta_s.imag() = b;
    }
  }

  Certificate cert;
  cert.kind = kind;
  cert.anchor = anchor;
  cert.support = sys.support;
  cert.fc = sys.fc;
  cert.alpha = sol.head(n);
  cert.beta = sol.tail(n);
  cert.targets = targets;
  cert.route_discrepancy = std::max((cert.alpha - alpha_s).cwiseAbs().maxCoeff(),
                                    (cert.beta - beta_s).cwiseAbs().maxCoeff() * sys.fc);
  cert.fourier = certificate_fourier(cert);
  return cert;
}

}  // namespace

Certificate build_sign_certificate(const InterpolationSystem& sys, const Eigen::VectorXcd& v) {
  if (v.size() != static_cast<Eigen::Index>(sys.support.size()))
    throw Error("sign vector length must equal |T|");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(std::abs(v(i)) - 1.0) > 1e-12) throw Error("sign vector entries must be unimodular");
  return assemble(sys, CertificateKind::Sign, -1, v);
}

Certificate build_localizer(const InterpolationSystem& sys, Real t_j) {
  const int j = sys.support.index_of(t_j);
  if (j < 0) throw Error("localizer anchor is not a support point");
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys.support.size()));
  e(j) = 1.0;
  return assemble(sys, CertificateKind::Localizer, j, e);
}

SpectrumVector certificate_fourier(const Certificate& cert) {
  const Kernel kernel(cert.fc);
  SpectrumVector b = SpectrumVector::zeros(cert.fc);
  for (int k = -cert.fc; k <= cert.fc; ++k) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < cert.support.size(); ++i) {
      // K(t - t_i) contributes kappa_k e^{-i2pi k t_i}; K' adds the factor i2pi k.
      const Complex phase = std::polar(1.0, -kTwoPi * k * cert.support[i]);
      acc += (cert.alpha(i) + cert.beta(i) * Complex(0.0, kTwoPi * k)) * phase;
    }
    b.at(k) = kernel.fourier()(k + cert.fc) * acc;
  }
  return b;
}

bool CertificateReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const PropertyCheck& CertificateReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error("no such certificate check: " + name);
}

std::string to_string(CertificateKind kind) {
  return kind == CertificateKind::Sign ? "sign" : "localizer";
}

namespace {

Real interpolation_residual(const Certificate& cert) {
  Real r = 0.0;
  for (std::size_t k = 0; k < cert.support.size(); ++k) {
    r = std::max(r, std::abs(cert(cert.support[k]) - cert.targets(k)));
    r = std::max(r, std::abs(cert(cert.support[k], 1)));
  }
  return r;
}

}  // namespace

CertificateReport verify_localizer(const Certificate& cert, Real c, Real grid_step) {
  if (cert.kind != CertificateKind::Localizer) throw Error("verify_localizer needs a localizer");
  const Real step = default_step(cert.fc, grid_step);
  const Real fc = cert.fc;
  const Real lambda = 1.0 / fc;
  const Real edge = c * lambda;
  const auto j = static_cast<std::size_t>(cert.anchor);
  CertificateReport rep;
  rep.kind = cert.kind;
  rep.fc = cert.fc;
  rep.support_size = cert.support.size();

  const Real residual = interpolation_residual(cert);
  rep.checks.push_back({"interpolation residual", residual, kInterpolationTolerance,
                        residual < kInterpolationTolerance});
  rep.checks.push_back({"Schur route agreement", cert.route_discrepancy, kInterpolationTolerance,
                        cert.route_discrepancy < kInterpolationTolerance});

  Eigen::VectorXcd dev = cert.alpha;
  dev(cert.anchor) -= 1.0;
  const Real alpha_dev = dev.cwiseAbs().maxCoeff();
  rep.checks.push_back({"||alpha - e_j||_inf", alpha_dev, bounds::kAlphaDeviation,
                        alpha_dev <= bounds::kAlphaDeviation + kBoundSlack});
  const Real beta_norm = cert.beta.cwiseAbs().maxCoeff() * fc;
  rep.checks.push_back({"||beta||_inf / lambda", beta_norm, bounds::kBeta,
                        beta_norm <= bounds::kBeta + kBoundSlack});
  const Real l2 = cert.fourier.coeffs.norm();
  rep.checks.push_back({"||q||_L2", l2, 1.0, l2 <= 1.0 + kBoundSlack});

  const auto offsets = near_offsets(edge, step);
  Real sup_off_anchor = 0.0;

  // Around the anchor: 1 - 4.07 (d fc)^2 <= Re q <= 1 - 2.30 (d fc)^2 and
  // |1 - q| <= C'_1 (d fc)^2.
  Real min_ratio = std::numeric_limits<Real>::infinity(), max_ratio = 0.0, max_c1 = 0.0;
  bool upper_ok = true, lower_ok = true, c1_ok = true;
  for (Real d : offsets) {
    if (d == 0.0) continue;
    const Complex q = cert(cert.support[j] + d);
    const Real s = (d * fc) * (d * fc);
    sup_off_anchor = std::max(sup_off_anchor, std::abs(q));
    const Real ratio = (1.0 - q.real()) / s;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    max_c1 = std::max(max_c1, std::abs(1.0 - q) / s);
    upper_ok &= q.real() <= 1.0 - bounds::kNearUpper * s + kBoundSlack;
    lower_ok &= q.real() >= 1.0 - bounds::kNearLower * s - kBoundSlack;
    c1_ok &= std::abs(1.0 - q) <= bounds::kOtherSpike * s + kBoundSlack;
  }
  rep.checks.push_back({"Re q <= 1 - 2.30 (t-t_j)^2 fc^2", min_ratio, bounds::kNearUpper, upper_ok});
  rep.checks.push_back({"Re q >= 1 - 4.07 (t-t_j)^2 fc^2", max_ratio, bounds::kNearLower, lower_ok});
  rep.checks.push_back({"|1 - q| <= C1' (t-t_j)^2 / lambda^2", max_c1, bounds::kOtherSpike, c1_ok});

  // Around every other support point: |q| <= 16.64 (d fc)^2.
  Real max_other = 0.0;
  bool other_ok = true;
  for (std::size_t l = 0; l < cert.support.size(); ++l) {
    if (l == j) continue;
    for (Real d : offsets) {
      const Real q = std::abs(cert(cert.support[l] + d));
      const Real s = (d * fc) * (d * fc);
      sup_off_anchor = std::max(sup_off_anchor, q);
      if (d != 0.0) max_other = std::max(max_other, q / s);
      other_ok &= q <= bounds::kOtherSpike * s + kBoundSlack;
    }
  }
  rep.checks.push_back({"|q| <= 16.64 (t-t_l)^2 fc^2", max_other, bounds::kOtherSpike, other_ok});

  const FarScan far = scan_far(cert, edge, step);
  rep.checks.push_back({"far |q| <= 0.69", far.sup, bounds::kFar,
                        far.sup <= bounds::kFar + kBoundSlack});
  sup_off_anchor = std::max(sup_off_anchor, far.sup);
  rep.global_sup = sup_off_anchor;
  rep.checks.push_back({"|q| < 1 off t_j", sup_off_anchor, 1.0, sup_off_anchor < 1.0});
  return rep;
}

CertificateReport verify_sign_certificate(const Certificate& cert, Real c, Real grid_step) {
  const Real step = default_step(cert.fc, grid_step);
  const Real fc = cert.fc;
  const Real edge = c / fc;
  CertificateReport rep;
  rep.kind = cert.kind;
  rep.fc = cert.fc;
  rep.support_size = cert.support.size();

  const Real residual = interpolation_residual(cert);
  rep.checks.push_back({"interpolation residual", residual, kInterpolationTolerance,
                        residual < kInterpolationTolerance});

  Real cb = std::numeric_limits<Real>::infinity();
  Real sup_near = 0.0;
  for (std::size_t l = 0; l < cert.support.size(); ++l) {
    for (Real d : near_offsets(edge, step)) {
      if (d == 0.0) continue;
      const Real q = std::abs(cert(cert.support[l] + d));
      sup_near = std::max(sup_near, q);
      cb = std::min(cb, (1.0 - q) / ((d * fc) * (d * fc)));
    }
  }
  const FarScan far = scan_far(cert, edge, step);
  const Real ca = far.any ? 1.0 - far.sup : 1.0;
  rep.measured_ca = ca;
  rep.measured_cb = cb;
  rep.global_sup = std::max(sup_near, far.sup);
  rep.checks.push_back({"C_a > 0", ca, 0.0, ca > 0.0});
  rep.checks.push_back({"C_b > 0", cb, 0.0, cb > 0.0});
  rep.checks.push_back({"c^2 C_b <= C_a", c * c * cb, ca, c * c * cb <= ca + kBoundSlack});
  rep.checks.push_back({"|q| < 1 off T", rep.global_sup, 1.0, rep.global_sup < 1.0});
  return rep;
}

Real tail_sum_excluding_two(const Kernel& kernel, const SupportSet& support, Real t, int order) {
  std::vector<std::pair<Real, std::size_t>> by_distance;
  by_distance.reserve(support.size());
  for (std::size_t k = 0; k < support.size(); ++k)
    by_distance.emplace_back(wrap_distance(t, support[k]), k);
  std::sort(by_distance.begin(), by_distance.end());
  Real sum = 0.0;
  for (std::size_t i = 2; i < by_distance.size(); ++i)
    sum += std::abs(kernel(t - support[by_distance[i].second], order));
  return sum;
}

Real tail_sum_excluding(const Kernel& kernel, const SupportSet& support, Real t, int skip_index,
                        int order) {
  Real sum = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k)
    if (static_cast<int>(k) != skip_index) sum += std::abs(kernel(t - support[k], order));
  return sum;
}

}  // namespace srlab
