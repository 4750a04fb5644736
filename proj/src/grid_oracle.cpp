#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "srlab/solver.hpp"

namespace srlab {

namespace {

/// The Fourier map at N grid points scaled by 1/sqrt(N), which makes its rows
/// orthonormal: A A^* = I.
class GridFourier {
 public:
  GridFourier(int fc, int grid) : fc_(fc), n_(grid), scale_(1.0 / std::sqrt(static_cast<Real>(grid))) {
    fft_.SetFlag(Eigen::FFT<Real>::Unscaled);
    buf_.resize(grid);
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) {
    std::vector<Complex> in(u.data(), u.data() + u.size());
    fft_.fwd(buf_, in);
    Eigen::VectorXcd out(2 * fc_ + 1);
    for (int k = -fc_; k <= fc_; ++k) out(k + fc_) = buf_[(k + n_) % n_] * scale_;
    return out;
  }

  Eigen::VectorXcd adjoint(const Eigen::VectorXcd& c) {
    std::vector<Complex> spec(n_, Complex(0.0));
    for (int k = -fc_; k <= fc_; ++k) spec[(k + n_) % n_] += c(k + fc_);
    fft_.inv(buf_, spec);
    return Eigen::Map<Eigen::VectorXcd>(buf_.data(), n_) * scale_;
  }

 private:
  int fc_, n_;
  Real scale_;
  Eigen::FFT<Real> fft_;
  std::vector<Complex> buf_;
};

Eigen::VectorXcd soft_threshold(const Eigen::VectorXcd& v, Real tau) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Real a = std::abs(v(i));
    out(i) = a > tau ? v(i) * (1.0 - tau / a) : Complex(0.0);
  }
  return out;
}

}  // namespace

OracleResult grid_l1_oracle(const SpectrumVector& y, Real delta, int grid_size,
                            const OracleOptions& opts) {
  if (grid_size < 8 * y.fc) throw Error("grid_l1_oracle: grid must have at least 8 fc points");
  if (!(delta >= 0.0)) throw Error("grid_l1_oracle: delta must be nonnegative");
  const Real root_n = std::sqrt(static_cast<Real>(grid_size));
  const Eigen::VectorXcd yp = y.coeffs / root_n;
  const Real dp = delta / root_n;
  GridFourier op(y.fc, grid_size);

  OracleResult out;
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(grid_size);
  Eigen::VectorXcd u_bar = u;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(y.size());
  Eigen::VectorXcd atc = Eigen::VectorXcd::Zero(grid_size);

  // Primal weights are O(|a|); the dual variable is O(sqrt(N)) times a unit-norm certificate.
  const Real ynorm = std::max(y.coeffs.norm(), 1e-300);
  Real tau = std::sqrt(0.99) * std::sqrt(ynorm / std::sqrt(static_cast<Real>(y.size()))) /
             std::pow(static_cast<Real>(grid_size), 0.25);
  Real sigma = 0.99 / tau;
  Real adapt = 0.5;

  // Moves u into the data ball, correcting on its own support first so the
  // l1 cost of the correction stays small.
  auto project_feasible = [&](const Eigen::VectorXcd& v, const Eigen::VectorXcd& av) {
    Eigen::VectorXcd r = av - yp;
    if (r.norm() <= dp) return v;
    Eigen::VectorXcd w = v;
    std::vector<Eigen::Index> active;
    for (Eigen::Index m = 0; m < v.size(); ++m)
      if (v(m) != Complex(0.0)) active.push_back(m);
    if (!active.empty() && active.size() <= static_cast<std::size_t>(4 * y.size())) {
      Eigen::MatrixXcd a(y.size(), static_cast<Eigen::Index>(active.size()));
      for (std::size_t l = 0; l < active.size(); ++l)
        for (int k = -y.fc; k <= y.fc; ++k)
          a(k + y.fc, l) = std::polar(1.0 / root_n, -2.0 * std::numbers::pi * k * active[l] / grid_size);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
      const Eigen::VectorXcd dv = cod.solve(r);
      for (std::size_t l = 0; l < active.size(); ++l) w(active[l]) -= dv(l);
      r -= a * dv;
    }
    const Real nr = r.norm();
    if (nr <= dp) return w;
    return Eigen::VectorXcd(w - op.adjoint(r * (1.0 - dp / nr)));
  };

  Eigen::VectorXcd au = Eigen::VectorXcd::Zero(y.size());
  Eigen::VectorXcd au_bar = au;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Eigen::VectorXcd c_old = c;
    Eigen::VectorXcd v = c + sigma * (au_bar - yp);
    const Real nv = v.norm();
    c = nv > sigma * dp ? Eigen::VectorXcd(v * (1.0 - sigma * dp / nv)) : Eigen::VectorXcd::Zero(v.size());
    const Eigen::VectorXcd atc_new = op.adjoint(c);
    const Eigen::VectorXcd u_new = soft_threshold(u - tau * atc_new, tau);
    const Eigen::VectorXcd au_new = op.apply(u_new);

    const Real pres = ((u - u_new) / tau - (atc - atc_new)).norm();
    const Real dres = ((c_old - c) / sigma - (au - au_new)).norm();
    au_bar = 2.0 * au_new - au;
    u = u_new;
    au = au_new;
    atc = atc_new;
    out.iterations = it;

    if (it % 25 == 0 || it == opts.max_iterations) {
      const Eigen::VectorXcd uf = project_feasible(u, au);
      const Real primal = uf.cwiseAbs().sum();
      const Real sup = atc.cwiseAbs().maxCoeff();
      const Eigen::VectorXcd cs = sup > 1.0 ? Eigen::VectorXcd(c / sup) : c;
      const Real dual = -cs.dot(yp).real() - dp * cs.norm();
      // Both bounds are valid at every check; keep the best of each.
      if (out.weights.size() == 0 || primal < out.objective) {
        out.objective = primal;
        out.weights = uf;
      }
      if (it == 25 || dual > out.dual_objective) out.dual_objective = dual;
      out.gap = out.objective - out.dual_objective;
      if (out.gap <= opts.gap_tolerance * std::max(1.0, out.objective)) {
        out.converged = true;
        break;
      }
    }
    // Residual balancing of the step sizes.
    if (pres > 2.0 * dres) {
      tau /= 1.0 - adapt;
      sigma *= 1.0 - adapt;
      adapt *= 0.99;
    } else if (dres > 2.0 * pres) {
      tau *= 1.0 - adapt;
      sigma /= 1.0 - adapt;
      adapt *= 0.99;
    }
  }

  std::vector<Spike> spikes;
  const Real wmax = out.weights.size() ? out.weights.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index m = 0; m < out.weights.size(); ++m)
    if (std::abs(out.weights(m)) > opts.report_threshold * wmax && wmax > 0.0)
      spikes.push_back({static_cast<Real>(m) / grid_size, out.weights(m)});
  out.estimate = AtomicMeasure(std::move(spikes));
  return out;
}

}  // namespace srlab
