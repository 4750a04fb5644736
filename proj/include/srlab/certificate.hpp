#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "srlab/kernel.hpp"
#include "srlab/measures.hpp"
#include "srlab/spectrum.hpp"

namespace srlab {

/// Published bounds on the interpolation system under separation >= 2/fc.
namespace bounds {
inline constexpr Real kIdentityMinusSchur = 8.747e-3;
inline constexpr Real kSchurInverse = 1.008824;
inline constexpr Real kIdentityMinusSchurInverse = 8.825e-3;
inline constexpr Real kAlphaDeviation = 8.825e-3;
/// In units of lambda_c.
inline constexpr Real kBeta = 3.294e-2;
inline constexpr Real kNearUpper = 2.30;
inline constexpr Real kNearLower = 4.07;
inline constexpr Real kOtherSpike = 16.64;
inline constexpr Real kFar = 0.69;
inline constexpr Real kTailK0 = 1.083;
inline constexpr Real kTailK1 = 1.75;
inline constexpr Real kTailK2 = 1.06;
inline constexpr Real kTailK3 = 18.6;
}  // namespace bounds

/// Hermite interpolation system [[D0, D1], [D1, D2]] over a support, with
/// (D_l)_{ik} = K^{(l)}(t_i - t_k), and its Schur complement diagnostics.
struct InterpolationSystem {
  SupportSet support;
  int fc = 0;
  Eigen::MatrixXd D0, D1, D2;
  /// S = D0 - D1 D2^{-1} D1.
  Eigen::MatrixXd schur;
  Real identity_minus_schur = 0.0;          // ||I - S||_inf
  Real schur_inverse = 0.0;                 // ||S^{-1}||_inf
  Real identity_minus_schur_inverse = 0.0;  // ||I - S^{-1}||_inf

  Eigen::MatrixXd block() const;
  /// Solves block() * [alpha; beta] = rhs for a complex right-hand side,
  /// direct LU plus one step of iterative refinement.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  Eigen::PartialPivLU<Eigen::MatrixXd> block_lu;
  Eigen::PartialPivLU<Eigen::MatrixXd> d2_lu;
  Eigen::PartialPivLU<Eigen::MatrixXd> schur_lu;
};

/// Requires fc even and >= 10, and min_separation(T) >= 2/fc.
InterpolationSystem build_system(const SupportSet& support, int fc);

/// ||M||_inf = max row sum of absolute values.
template <typename Derived>
Real inf_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

enum class CertificateKind { Sign, Localizer };

/// q(t) = sum_k alpha_k K(t - t_k) + beta_k K'(t - t_k), together with its
/// Fourier coefficients b (q(t) = sum b_k e^{i2pi k t}).
struct Certificate {
  CertificateKind kind = CertificateKind::Sign;
  /// Index of t_j for a localizer; -1 for a sign certificate.
  int anchor = -1;
  SupportSet support;
  int fc = 0;
  Eigen::VectorXcd alpha, beta;
  SpectrumVector fourier;
  /// Sign certificate targets v (or e_{t_j} for a localizer).
  Eigen::VectorXcd targets;
  /// max-abs difference between the block solve and the Schur-complement route.
  Real route_discrepancy = 0.0;

  /// Kernel-sum evaluation of q^{(order)}(t), order 0..2.
  Complex operator()(Real t, int order = 0) const;
};

/// Certificate with q(t_j) = v_j and q'(t_k) = 0. Requires |v_j| = 1.
Certificate build_sign_certificate(const InterpolationSystem& sys, const Eigen::VectorXcd& v);

/// Localizer q_{t_j}: 1 at t_j, 0 on the rest of T, flat at every t_k.
Certificate build_localizer(const InterpolationSystem& sys, Real t_j);

/// Fourier coefficients of the kernel-sum form, k = -fc..fc.
SpectrumVector certificate_fourier(const Certificate& cert);

struct PropertyCheck {
  std::string name;
  Real measured;
  Real bound;
  bool pass;
};

struct CertificateReport {
  CertificateKind kind = CertificateKind::Sign;
  int fc = 0;
  std::size_t support_size = 0;
  std::vector<PropertyCheck> checks;
  /// Sign certificates only: 1 - max far |q|, and the largest C_b with
  /// |q| <= 1 - C_b (t - t_j)^2 / lambda^2 near every spike.
  Real measured_ca = 0.0;
  Real measured_cb = 0.0;
  /// Largest |q| away from the anchor (localizer) or from T (sign).
  Real global_sup = 0.0;

  bool all_pass() const;
  const PropertyCheck& check(const std::string& name) const;
};

/// Grid verification of the localizer properties and coefficient bounds.
/// grid_step defaults to lambda_c / 200 and must not exceed it.
CertificateReport verify_localizer(const Certificate& cert, Real c = kNearRadius,
                                   Real grid_step = 0.0);

/// Measures C_a and C_b and checks 0 < c^2 C_b <= C_a.
CertificateReport verify_sign_certificate(const Certificate& cert, Real c = kNearRadius,
                                          Real grid_step = 0.0);

/// sum over T minus the two points nearest t of |K^{(order)}(t - t_k)|.
Real tail_sum_excluding_two(const Kernel& kernel, const SupportSet& support, Real t, int order);

/// sum over T minus {t_0} of |K^{(order)}(t - t_k)|.
Real tail_sum_excluding(const Kernel& kernel, const SupportSet& support, Real t, int skip_index,
                        int order);

std::string to_string(CertificateKind kind);

}  // namespace srlab
