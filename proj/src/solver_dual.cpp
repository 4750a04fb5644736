#include <cmath>

#include "srlab/solver.hpp"

namespace srlab {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Projection onto the Hermitian PSD cone by clipping negative eigenvalues.
/// Rebuilds from whichever eigenvalue side is smaller.
MatrixXcd project_psd(const MatrixXcd& w, Eigen::SelfAdjointEigenSolver<MatrixXcd>& es) {
  es.compute(w);
  const auto& ev = es.eigenvalues();
  const auto& V = es.eigenvectors();
  const Eigen::Index n = ev.size();
  Eigen::Index first_pos = 0;
  while (first_pos < n && ev(first_pos) <= 0.0) ++first_pos;
  const Eigen::Index npos = n - first_pos;
  if (npos == 0) return MatrixXcd::Zero(n, n);
  if (npos <= first_pos) {
    const auto Vp = V.rightCols(npos);
    return Vp * ev.tail(npos).asDiagonal() * Vp.adjoint();
  }
  const auto Vn = V.leftCols(first_pos);
  MatrixXcd x = w;
  x.noalias() -= Vn * ev.head(first_pos).asDiagonal() * Vn.adjoint();
  return x;
}

/// Prox of -Re<y,c> + delta ||c|| + indicator of the affine constraints, in the
/// Frobenius metric with penalty rho. The c block appears twice in the
/// Hermitian matrix, hence the factors of 2.
void affine_prox(MatrixXcd& z, const VectorXcd& y, Real delta, Real rho) {
  const Eigen::Index n = y.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i + j < n; ++i) sum += z(i, i + j);
    if (j == 0) sum -= 1.0;
    const Complex corr = sum / static_cast<Real>(n - j);
    for (Eigen::Index i = 0; i + j < n; ++i) {
      z(i, i + j) -= corr;
      z(i + j, i) = std::conj(z(i, i + j));
    }
    if (j == 0)
      for (Eigen::Index i = 0; i < n; ++i) z(i, i) = z(i, i).real();
  }
  VectorXcd v = (z.col(n).head(n) + z.row(n).head(n).adjoint()) / 2.0 + y / (2.0 * rho);
  const Real nv = v.norm();
  const Real tau = delta / (2.0 * rho);
  v *= nv > tau ? 1.0 - tau / nv : 0.0;
  z.col(n).head(n) = v;
  z.row(n).head(n) = v.adjoint();
  z(n, n) = 1.0;
}

}  // namespace

DualSolution solve_dual(const SpectrumVector& y, Real delta, const SolverOptions& opts) {
  if (!(delta >= 0.0)) throw Error("solve_dual: delta must be nonnegative");
  if (!(opts.penalty > 0.0) || opts.max_iterations < 1 || !(opts.tolerance > 0.0))
    throw Error("solve_dual: invalid solver options");

  DualSolution out;
  out.fc = y.fc;
  out.c = SpectrumVector::zeros(y.fc);
  const Real scale = y.coeffs.norm();
  // Re<y,c> <= ||y|| ||c||: with ||y|| <= delta the optimum is c = 0.
  if (scale == 0.0 || delta >= scale) {
    out.converged = true;
    return out;
  }

  // (y, delta) -> (y, delta) / ||y|| leaves the maximizer unchanged.
  const VectorXcd yn = y.coeffs / scale;
  const Real dn = delta / scale;
  const Eigen::Index n = yn.size();

  MatrixXcd z = MatrixXcd::Zero(n + 1, n + 1);
  z.topLeftCorner(n, n).diagonal().setConstant(1.0 / static_cast<Real>(n));
  z(n, n) = 1.0;
  MatrixXcd u = MatrixXcd::Zero(n + 1, n + 1);
  MatrixXcd x(n + 1, n + 1), z_old(n + 1, n + 1);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(n + 1);
  Real rho = opts.penalty;

  out.trace.reserve(std::min(opts.max_iterations, 4096));
  for (int it = 1; it <= opts.max_iterations; ++it) {
    x = project_psd(z - u, es);
    z_old = z;
    z = x + u;
    affine_prox(z, yn, dn, rho);
    u += x - z;

    const Real r = (x - z).norm();
    const Real s = rho * (z - z_old).norm();
    const VectorXcd c = z.col(n).head(n);
    const Real obj = (c.dot(yn).real() - dn * c.norm()) * scale;
    out.trace.push_back({r, s, rho, obj});
    out.iterations = it;
    if (r < opts.tolerance && s < opts.tolerance) {
      out.converged = true;
      break;
    }
    if (opts.balance_interval > 0 && it <= opts.balance_until && it % opts.balance_interval == 0) {
      if (r > opts.balance_ratio * s) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s > opts.balance_ratio * r) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }

  out.c.coeffs = z.col(n).head(n);
  // Rescale onto the feasible set so the objective is a certified lower bound.
  out.raw_sup = trig_poly_sup(out.c, 16 * std::max(1, y.fc));
  if (out.raw_sup > 1.0) out.c.coeffs /= out.raw_sup;
  out.objective = out.c.coeffs.dot(y.coeffs).real() - delta * out.c.coeffs.norm();
  return out;
}

Real data_residual(const AtomicMeasure& x, const SpectrumVector& y) {
  return (lowpass_sample(x, y.fc).coeffs - y.coeffs).norm();
}

}  // namespace srlab
